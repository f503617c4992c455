#include "scone/dual_cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scone/faces.hpp"
#include "scone/lp.hpp"
#include "scone/oracle.hpp"

namespace scone {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Check {
  bool violated = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

// |target| <= prod v_a^{l_a} over the given indices.
Check check_product(const Scalar& target, const std::vector<const Scalar*>& v, const std::vector<Rational>& lambda,
                    bool exact, double log_tol) {
  Check c;
  double t = std::abs(target.value());
  c.lhs = t > 0 ? std::log(t) : kNegInf;
  c.rhs = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (sgn(lambda[i]) == 0) continue;
    double vi = v[i]->value();
    c.rhs += vi > 0 ? lambda[i].get_d() * std::log(vi) : kNegInf;
  }
  if (target.is_zero()) return c;
  if (exact) {
    std::vector<Rational> bases;
    for (const auto* x : v) bases.push_back(x->exact());
    c.violated = power_compare_exact(target.exact(), bases, lambda) > 0;
    return c;
  }
  if (c.rhs == kNegInf) {
    c.violated = true;
    return c;
  }
  c.violated = c.lhs > c.rhs + log_tol * std::max(1.0, std::abs(c.rhs));
  return c;
}

bool all_exact(const std::vector<Scalar>& xs) {
  return std::all_of(xs.begin(), xs.end(), [](const Scalar& x) { return x.is_exact(); });
}

}  // namespace

const char* dual_mode_name(DualMode m) {
  switch (m) {
    case DualMode::AllLambda: return "allLambda";
    case DualMode::Circuits: return "circuits";
    case DualMode::Reduced: return "reduced";
    case DualMode::Lp: return "lp";
  }
  return "reduced";
}

DualMode parse_dual_mode(const std::string& s) {
  if (s == "allLambda") return DualMode::AllLambda;
  if (s == "circuits") return DualMode::Circuits;
  if (s == "reduced") return DualMode::Reduced;
  if (s == "lp") return DualMode::Lp;
  throw Error("unknown dual mode: " + s);
}

DualMembershipReport dual_membership(const DualVector& u, DualMode mode, double log_tol) {
  const Support& s = u.support;
  DualMembershipReport rep;
  rep.mode = mode;
  rep.exact = u.all_exact();
  for (std::size_t i = 0; i < u.v.size(); ++i)
    if (u.v[i].sign() < 0) {
      rep.member = false;
      rep.reason = "negative entry v at " + format_exponent(s.even[i]);
      return rep;
    }

  auto target_of = [&](Parity p, const Exponent& b) -> const Scalar& {
    return p == Parity::Even ? u.v[*s.even_index(b)] : u.w[*s.odd_index(b)];
  };

  if (mode == DualMode::Circuits || mode == DualMode::Reduced) {
    EnumerateOptions opt;
    opt.reduced_only = mode == DualMode::Reduced;
    for (Parity p : {Parity::Even, Parity::Odd}) {
      for (const auto& c : enumerate_circuits(s, p, opt)) {
        std::vector<const Scalar*> vs;
        for (const auto& a : c.outer) vs.push_back(&u.v[*s.even_index(a)]);
        auto chk = check_product(target_of(p, c.inner), vs, c.lambda, rep.exact, log_tol);
        if (chk.violated) {
          rep.member = false;
          rep.violated = DualViolation{c, chk.lhs, chk.rhs};
          rep.reason = std::string(parity_name(p)) + " circuit inequality violated";
          return rep;
        }
      }
    }
    return rep;
  }

  for (Parity p : {Parity::Even, Parity::Odd}) {
    const auto& inners = p == Parity::Even ? s.even : s.odd;
    for (const auto& b : inners) {
      const Scalar& target = target_of(p, b);
      if (mode == DualMode::Lp) {
        if (!dual_lp_characterization(u.v, target, s.even, b, LpVariant::EntropyShift)) {
          rep.member = false;
          rep.reason = std::string("linear characterization infeasible at ") + parity_name(p) + " exponent " +
                       format_exponent(b);
          return rep;
        }
        continue;
      }
      for (const auto& vert : oracle::polytope_vertices(s.even, b)) {
        std::vector<const Scalar*> vs;
        std::vector<Rational> lam;
        std::vector<Exponent> outer;
        for (std::size_t i = 0; i < vert.size(); ++i) {
          if (sgn(vert[i]) == 0) continue;
          vs.push_back(&u.v[i]);
          lam.push_back(vert[i]);
          outer.push_back(s.even[i]);
        }
        auto chk = check_product(target, vs, lam, rep.exact, log_tol);
        if (chk.violated) {
          rep.member = false;
          rep.violated = DualViolation{make_circuit(outer, b, p, s.even), chk.lhs, chk.rhs};
          rep.reason = std::string(parity_name(p)) + " inequality violated at a vertex of Lambda";
          return rep;
        }
      }
    }
  }
  return rep;
}

bool dual_ag_membership(const std::vector<Scalar>& v, const Scalar& w_beta, const std::vector<Exponent>& A,
                        const Exponent& beta, Parity parity) {
  if (v.size() != A.size()) throw Error("dual vector does not match the exponent set");
  for (const auto& x : v)
    if (x.sign() < 0) return false;
  if (parity == Parity::Even && w_beta.sign() < 0) return false;
  bool exact = all_exact(v) && w_beta.is_exact();
  for (const auto& vert : oracle::polytope_vertices(A, beta)) {
    std::vector<const Scalar*> vs;
    std::vector<Rational> lam;
    for (std::size_t i = 0; i < vert.size(); ++i)
      if (sgn(vert[i]) != 0) {
        vs.push_back(&v[i]);
        lam.push_back(vert[i]);
      }
    if (check_product(w_beta, vs, lam, exact, 1e-9).violated) return false;
  }
  return true;
}

bool dual_lp_characterization(const std::vector<Scalar>& v, const Scalar& w_beta, const std::vector<Exponent>& A,
                              const Exponent& beta, LpVariant variant, double tol) {
  if (v.size() != A.size()) throw Error("dual vector does not match the exponent set");
  for (const auto& x : v)
    if (x.sign() < 0) return false;
  if (w_beta.is_zero()) return true;
  auto lf = lambda_face(A, beta);
  if (!lf) return true;  // beta outside conv(A): the constraint is vacuous
  // Points that never carry weight in Lambda play no role; a zero v on the
  // face forces w = 0.
  std::vector<std::size_t> idx;
  for (auto i : lf->face) {
    if (v[i].is_zero()) return false;
    idx.push_back(i);
  }
  const std::size_t n = beta.size(), m = idx.size();
  const double w = std::abs(w_beta.value());
  // Rows: (a - b)^T tau+ - (a - b)^T tau- - s + sigma_a = -rhs_a, minimize s.
  // EntropyShift: rhs_a = |w| ln(|w| / v_a);  ScaledTau (v* = |w|): rhs_a = ln(|w| / v_a).
  const std::size_t cols = 2 * n + 1 + m;
  Matrix<double> rows(m, std::vector<double>(cols, 0.0));
  std::vector<double> rhs(m), cost(cols, 0.0);
  cost[2 * n] = 1.0;
  double scale = 1.0;
  for (std::size_t r = 0; r < m; ++r) {
    const Exponent& a = A[idx[r]];
    for (std::size_t j = 0; j < n; ++j) {
      double diff = Rational(a[j] - beta[j]).get_d();
      rows[r][j] = diff;
      rows[r][n + j] = -diff;
    }
    rows[r][2 * n] = -1.0;
    rows[r][2 * n + 1 + r] = 1.0;
    double ratio = std::log(w / v[idx[r]].value());
    double c = variant == LpVariant::EntropyShift ? w * ratio : ratio;
    rhs[r] = -c;
    scale = std::max(scale, std::abs(c));
  }
  auto res = solve_lp(rows, rhs, cost);
  if (res.status != LpStatus::Optimal) throw Error("linear characterization LP failed");
  return res.objective <= tol * scale;
}

json dual_report_to_json(const DualMembershipReport& r) {
  json j{{"kind", "dual-membership"}, {"member", r.member}, {"mode", dual_mode_name(r.mode)}, {"exact", r.exact}};
  if (!r.reason.empty()) j["reason"] = r.reason;
  if (r.violated) {
    j["violated"] = {{"circuit", circuit_to_json(r.violated->circuit)},
                     {"lhs", r.violated->lhs},
                     {"rhs", r.violated->rhs}};
  }
  return j;
}

}  // namespace scone
