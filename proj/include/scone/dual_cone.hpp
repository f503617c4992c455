#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scone/circuits.hpp"
#include "scone/power_compare.hpp"
#include "scone/sfunction.hpp"

namespace scone {

enum class DualMode { AllLambda, Circuits, Reduced, Lp };
const char* dual_mode_name(DualMode m);
DualMode parse_dual_mode(const std::string& s);

struct DualViolation {
  Circuit circuit;   // for AllLambda: the support of the violating vertex
  double lhs = 0.0;  // ln|target|
  double rhs = 0.0;  // sum l_a ln v_a
};

struct DualMembershipReport {
  bool member = true;
  DualMode mode = DualMode::Reduced;
  bool exact = false;
  std::optional<DualViolation> violated;
  std::string reason;
};

/// Membership of (v, w) in the dual S-cone. Exact when every entry is exact.
DualMembershipReport dual_membership(const DualVector& u, DualMode mode, double log_tol = 1e-9);

/// Dual of the single AG cone over (A, beta) of the given parity.
bool dual_ag_membership(const std::vector<Scalar>& v, const Scalar& w_beta, const std::vector<Exponent>& A,
                        const Exponent& beta, Parity parity);

enum class LpVariant { EntropyShift, ScaledTau };

/// Decides the linear characterization in tau (floating LP: the data are logarithms).
bool dual_lp_characterization(const std::vector<Scalar>& v, const Scalar& w_beta, const std::vector<Exponent>& A,
                              const Exponent& beta, LpVariant variant, double tol = 1e-9);

json dual_report_to_json(const DualMembershipReport& r);

}  // namespace scone
