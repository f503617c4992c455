#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scone/scone_member.hpp"

namespace scone {

/// sum c[i] x^i.
struct UniPoly {
  std::vector<Scalar> c;

  UniPoly() = default;
  explicit UniPoly(std::vector<Scalar> coeffs);
  /// Degree of the top nonzero coefficient (-1 for zero).
  int degree() const;
  Scalar coeff(int i) const;
  double eval(double x) const;
  bool all_exact() const;
};

/// As an S-function over the full support {0, ..., max(top, deg)}.
SFunction to_sfunction(const UniPoly& p, int top = -1);
UniPoly uni_from_sfunction(const SFunction& f);
json unipoly_to_json(const UniPoly& p);
/// Accepts {"coeffs": [...]} or an S-function document with n = 1.
UniPoly unipoly_from_json(const json& j, bool exact);

UniPoly sage_representative(const UniPoly& f);

/// inf{x > 0 : fhat(x) < 0}, or +inf.
double compute_x0(const UniPoly& fhat);

struct ApproxStep {
  int N = 0;
  double c_star = 0.0;
  double x0 = 0.0;
  UniPoly pN;
  Certificate cert;
  int queries = 0;
};

struct ApproxOptions {
  double c_tol = 1e-6;  // relative to c*
  std::optional<double> cap;  // default 10 (1 + sum |c_i|) 2
  MembershipOptions membership;
};

ApproxStep approx_step(const UniPoly& f, int N, const ApproxOptions& opt = {});

/// (x - 1/2)^4 + 1/1000.
UniPoly putinar_polynomial();

struct PutinarCheck {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct PutinarReport {
  int d = 0;
  std::vector<Rational> v;
  Rational pairing;           // v(f)
  Rational pairing_no_shift;  // v((x - 1/2)^4)
  std::vector<PutinarCheck> checks;
  bool all_ok() const;
};

PutinarReport putinar_verify(int d);
json putinar_report_to_json(const PutinarReport& r);

struct QModuleResult {
  bool found = false;
  std::vector<UniPoly> p;          // p0 .. p3
  std::vector<Certificate> certs;  // SONC certificate per p_j
  std::string note;
};

/// Searches f = p0 + x p1 + (1 - x) p2 + x (1 - x) p3 with SONC p_j of degree <= d.
QModuleResult qmodule_search(const UniPoly& f, int d, const MembershipOptions& opt = {});
json qmodule_result_to_json(const QModuleResult& r);

}  // namespace scone
