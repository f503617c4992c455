#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "scone/ag_cert.hpp"
#include "scone/circuits.hpp"
#include "scone/sfunction.hpp"

namespace scone {

/// t |x|^beta with t >= 0.
struct MonomialTerm {
  Exponent beta;
  Scalar t;
};

struct AGPart {
  AGFunction f;
  AGWitness witness;
};

struct AGDecomposition {
  Support support;  // support of the decomposed function
  std::vector<AGPart> parts;
  std::vector<MonomialTerm> monomials;
};

struct CircuitDecomposition {
  Support support;
  std::vector<CircuitFunction> parts;
  std::vector<MonomialTerm> monomials;
};

struct DualRefutation {
  DualVector u;
  Scalar pairing;
};

struct PointRefutation {
  std::vector<double> x;
  double value = 0.0;
};

using Certificate = std::variant<AGDecomposition, CircuitDecomposition, DualRefutation, PointRefutation>;
const char* certificate_kind(const Certificate& c);

struct MembershipOptions {
  double tol = 1e-8;
  int max_iters = 400;  // Newton steps over the whole barrier run
  std::uint64_t seed = 1;
  int samples = 64;  // 0 disables the sampling pre-pass
  /// When set, only these even exponents may act as positive outer terms.
  std::optional<std::vector<Exponent>> outer;
};

struct MembershipResult {
  Verdict verdict = Verdict::Indeterminate;
  std::optional<Certificate> cert;
  double margin = 0.0;  // optimal t of the SAGE program (log scale), when computed
  std::string note;
};

MembershipResult scone_membership(const SFunction& f, const MembershipOptions& opt = {});

/// Drops zero coefficients from the support.
SFunction trim_support(const SFunction& f);

/// Re-certifies f over its own support.
MembershipResult restrict_support(const SFunction& f, const AGDecomposition& larger, const MembershipOptions& opt = {});

/// Splits every AG part into circuit functions. With `reduced_only`, each
/// circuit is rewritten over circuits that are reduced with respect to
/// `dec.support.even`.
CircuitDecomposition decompose_to_circuits(const AGDecomposition& dec, bool reduced_only);

enum class SimplexStatus { Certified, Refuted, NotApplicable, Indeterminate };
const char* simplex_status_name(SimplexStatus s);

struct SimplexResult {
  SimplexStatus status = SimplexStatus::NotApplicable;
  std::optional<Certificate> cert;
  std::string reason;
};

SimplexResult simplex_fast_path(const SFunction& f, const MembershipOptions& opt = {});

struct LowerBound {
  double gamma = 0.0;
  Certificate cert;  // for f - gamma
  int queries = 0;
};

struct BoundOptions {
  double gamma_tol = 1e-6;
  int max_doublings = 30;
  MembershipOptions membership;
};

LowerBound sonc_lower_bound(const SFunction& f, const BoundOptions& opt = {});

struct VerifyResult {
  bool ok = false;
  std::string reason;
};

VerifyResult verify_certificate(const SFunction& f, const Certificate& cert, double rel_tol = 1e-9);

json certificate_to_json(const Certificate& c);
Certificate certificate_from_json(const json& j, const SFunction& f, bool exact);

}  // namespace scone
