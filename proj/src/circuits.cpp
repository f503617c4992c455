#include "scone/circuits.hpp"

#include <algorithm>
#include <cmath>

#include "scone/power_compare.hpp"

namespace scone {

const char* parity_name(Parity p) { return p == Parity::Even ? "even" : "odd"; }

Parity parse_parity(const std::string& s) {
  if (s == "even") return Parity::Even;
  if (s == "odd") return Parity::Odd;
  throw Error("parity must be \"even\" or \"odd\"");
}

bool affinely_independent_exps(const std::vector<Exponent>& A) {
  if (A.empty()) return true;
  return affinely_independent(A, A[0].size());
}

std::optional<BarycentricSolve> try_lambda_unique(const std::vector<Exponent>& A, const Exponent& beta) {
  if (A.empty()) throw Error("empty outer set");
  const std::size_t dim = A[0].size();
  if (!affinely_independent(A, dim)) throw Error("outer exponents are affinely dependent");
  Exponent rhs = beta;
  rhs.push_back(Rational(1));
  auto sol = solve(lifted_columns(A, dim), rhs);
  if (!sol) return std::nullopt;
  BarycentricSolve r;
  r.lambda = std::move(*sol);
  r.in_relint = std::all_of(r.lambda.begin(), r.lambda.end(), [](const Rational& q) { return sgn(q) > 0; });
  r.in_hull = std::all_of(r.lambda.begin(), r.lambda.end(), [](const Rational& q) { return sgn(q) >= 0; });
  return r;
}

BarycentricSolve lambda_unique(const std::vector<Exponent>& A, const Exponent& beta) {
  auto r = try_lambda_unique(A, beta);
  if (!r) throw Error("inner exponent " + format_exponent(beta) + " is not in the affine hull");
  return *r;
}

std::pair<std::size_t, std::size_t> reducedness_counts(const std::vector<Exponent>& outer, const Exponent& inner,
                                                       const std::vector<Exponent>& ambient_even) {
  std::size_t rE = 0, rO = 0;
  for (const auto& a : ambient_even) {
    if (std::find(outer.begin(), outer.end(), a) != outer.end()) continue;
    auto sol = try_lambda_unique(outer, a);
    if (!sol || !sol->in_hull) continue;
    ++rO;
    if (a != inner) ++rE;
  }
  return {rE, rO};
}

Circuit make_circuit(std::vector<Exponent> outer, const Exponent& inner, Parity parity,
                     const std::vector<Exponent>& ambient_even) {
  std::sort(outer.begin(), outer.end());
  outer.erase(std::unique(outer.begin(), outer.end()), outer.end());
  auto sol = lambda_unique(outer, inner);
  if (!sol.in_relint) throw Error("inner exponent " + format_exponent(inner) + " is not in the relative interior");
  if (parity == Parity::Odd && !is_odd_exponent(inner)) throw Error("odd circuit needs an odd inner exponent");
  Circuit c;
  c.outer = std::move(outer);
  c.inner = inner;
  c.parity = parity;
  c.lambda = std::move(sol.lambda);
  std::tie(c.rE, c.rO) = reducedness_counts(c.outer, c.inner, ambient_even);
  return c;
}

bool circuit_less(const Circuit& a, const Circuit& b) {
  if (a.parity != b.parity) return a.parity == Parity::Even;
  if (a.outer.size() != b.outer.size()) return a.outer.size() < b.outer.size();
  if (a.outer != b.outer) return a.outer < b.outer;
  return a.inner < b.inner;
}

std::vector<Circuit> enumerate_circuits(const Support& s, Parity parity, const EnumerateOptions& opt) {
  const std::size_t max_outer = std::min(opt.max_outer ? opt.max_outer : s.n + 1, s.n + 1);
  const auto& pts = s.even;
  const auto& inners = parity == Parity::Even ? s.even : s.odd;
  std::vector<Circuit> out;

  std::vector<std::size_t> idx;
  // Depth-first over index subsets; dependent sets are pruned with all supersets.
  auto visit = [&](auto&& self, std::size_t start) -> void {
    if (!idx.empty()) {
      std::vector<Exponent> outer;
      for (auto i : idx) outer.push_back(pts[i]);
      if (!affinely_independent_exps(outer)) return;
      for (const auto& b : inners) {
        if (parity == Parity::Even && outer.size() > 1 && std::find(outer.begin(), outer.end(), b) != outer.end())
          continue;
        auto sol = try_lambda_unique(outer, b);
        if (!sol || !sol->in_relint) continue;
        Circuit c;
        c.outer = outer;
        c.inner = b;
        c.parity = parity;
        c.lambda = sol->lambda;
        std::tie(c.rE, c.rO) = reducedness_counts(outer, b, pts);
        if (opt.reduced_only && !c.reduced()) continue;
        out.push_back(std::move(c));
        if (out.size() > opt.budget) throw Error("circuit enumeration exceeded its budget");
      }
    }
    if (idx.size() == max_outer) return;
    for (std::size_t i = start; i < pts.size(); ++i) {
      idx.push_back(i);
      self(self, i + 1);
      idx.pop_back();
    }
  };
  visit(visit, 0);
  std::stable_sort(out.begin(), out.end(), circuit_less);
  return out;
}

bool CircuitFunction::all_exact() const {
  return d.is_exact() && std::all_of(c.begin(), c.end(), [](const Scalar& x) { return x.is_exact(); });
}

double circuit_number(const std::vector<double>& c, const std::vector<double>& lambda) {
  double log_theta = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (lambda[i] == 0.0) continue;
    if (c[i] <= 0.0) return 0.0;
    log_theta += lambda[i] * std::log(c[i] / lambda[i]);
  }
  return std::exp(log_theta);
}

double circuit_number(const CircuitFunction& cf) {
  std::vector<double> c, l;
  for (std::size_t i = 0; i < cf.c.size(); ++i) {
    c.push_back(cf.c[i].value());
    l.push_back(cf.circuit.lambda[i].get_d());
  }
  return circuit_number(c, l);
}

std::partial_ordering compare_inner_to_theta(const CircuitFunction& cf, double rel_tol) {
  if (cf.all_exact()) {
    std::vector<Rational> bases;
    for (std::size_t i = 0; i < cf.c.size(); ++i) {
      if (sgn(cf.c[i].exact()) < 0) return std::partial_ordering::greater;
      bases.push_back(cf.c[i].exact() / cf.circuit.lambda[i]);
    }
    auto o = power_compare_exact(cf.d.exact(), bases, cf.circuit.lambda);
    return o;
  }
  double theta = circuit_number(cf);
  double ad = std::abs(cf.d.value());
  if (std::abs(ad - theta) <= rel_tol * std::max(1.0, theta)) return std::partial_ordering::equivalent;
  return ad < theta ? std::partial_ordering::less : std::partial_ordering::greater;
}

bool circuit_nonnegative(const CircuitFunction& cf, double rel_tol) {
  for (const auto& x : cf.c)
    if (x.sign() < 0) return false;
  if (cf.circuit.parity == Parity::Even && cf.d.sign() >= 0) return true;
  return compare_inner_to_theta(cf, rel_tol) <= 0;
}

std::vector<std::pair<Rational, std::vector<Rational>>> lambda_vertex_decompose(const std::vector<Exponent>& A,
                                                                                 const Exponent& beta,
                                                                                 const std::vector<Rational>& lambda) {
  if (lambda.size() != A.size()) throw Error("weights do not match the exponent set");
  Rational total(0);
  Exponent moment(beta.size(), Rational(0));
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (sgn(lambda[i]) < 0) throw Error("weights must be non-negative");
    total += lambda[i];
    for (std::size_t j = 0; j < beta.size(); ++j) moment[j] += lambda[i] * A[i][j];
  }
  if (total != 1 || moment != beta) throw Error("weights are not barycentric coordinates of the inner exponent");
  return lambda_vertex_decompose<Rational>(A, lambda);
}

const char* extreme_kind_name(ExtremeKind k) {
  switch (k) {
    case ExtremeKind::ExtremeEven: return "ExtremeEven";
    case ExtremeKind::ExtremeOdd: return "ExtremeOdd";
    case ExtremeKind::ExtremeSingle: return "ExtremeSingle";
    case ExtremeKind::NotExtreme: return "NotExtreme";
  }
  return "NotExtreme";
}

ExtremalityLabel classify_extreme(const CircuitFunction& cf, const Support& ambient, double rel_tol) {
  const Circuit& c = cf.circuit;
  for (const auto& a : c.outer)
    if (!ambient.even_index(a)) throw Error("outer exponent " + format_exponent(a) + " is not in the support");
  if (c.parity == Parity::Even ? !ambient.even_index(c.inner) && c.outer.size() > 1 : !ambient.odd_index(c.inner))
    throw Error("inner exponent " + format_exponent(c.inner) + " is not in the support");
  for (const auto& x : cf.c)
    if (x.sign() <= 0) throw Error("outer coefficients of a circuit function must be positive");
  if (c.outer.size() < 2) return {ExtremeKind::NotExtreme, "outer set has a single point"};
  auto [rE, rO] = reducedness_counts(c.outer, c.inner, ambient.even);
  if (c.parity == Parity::Even) {
    if (rE != 0) return {ExtremeKind::NotExtreme, "circuit is not reduced (rE = " + std::to_string(rE) + ")"};
    if (cf.d.sign() >= 0) return {ExtremeKind::NotExtreme, "inner coefficient is not -Theta"};
  } else if (rO != 0) {
    return {ExtremeKind::NotExtreme, "circuit is not reduced (rO = " + std::to_string(rO) + ")"};
  }
  auto o = compare_inner_to_theta(cf, rel_tol);
  if (o == 0) return {c.parity == Parity::Even ? ExtremeKind::ExtremeEven : ExtremeKind::ExtremeOdd, ""};
  if (o < 0) return {ExtremeKind::NotExtreme, "|inner coefficient| < Theta"};
  return {ExtremeKind::NotExtreme, "|inner coefficient| > Theta (function is negative somewhere)"};
}

ExtremalityLabel classify_extreme(const MonomialRay& ray, const Support& ambient) {
  if (!ambient.even_index(ray.beta)) throw Error("monomial exponent " + format_exponent(ray.beta) + " is not in the even support");
  bool in_odd = ambient.odd_index(ray.beta).has_value();
  if (ray.sign == 0) {
    if (in_odd) return {ExtremeKind::NotExtreme, "splits as (|x|^b + x^b)/2 + (|x|^b - x^b)/2"};
    return {ExtremeKind::ExtremeSingle, ""};
  }
  if (ray.sign != 1 && ray.sign != -1) throw Error("monomial ray sign must be -1, 0 or 1");
  if (!in_odd) throw Error("signed monomial ray needs the exponent in the odd support");
  return {ExtremeKind::ExtremeSingle, ""};
}

json circuit_to_json(const Circuit& c) {
  json outer = json::array(), lambda = json::array();
  for (std::size_t i = 0; i < c.outer.size(); ++i) {
    outer.push_back(exponent_to_json(c.outer[i]));
    lambda.push_back(format_rational(c.lambda[i]));
  }
  return json{{"outer", outer},
              {"inner", exponent_to_json(c.inner)},
              {"parity", parity_name(c.parity)},
              {"lambda", lambda},
              {"rE", c.rE},
              {"rO", c.rO}};
}

json circuit_function_to_json(const CircuitFunction& cf) {
  json j = circuit_to_json(cf.circuit);
  json cs = json::array();
  for (const auto& x : cf.c) cs.push_back(scalar_to_json(x));
  j["c"] = cs;
  j["d"] = scalar_to_json(cf.d);
  return j;
}

CircuitFunction circuit_function_from_json(const json& j, const std::vector<Exponent>& ambient_even, bool exact) {
  std::vector<Exponent> outer;
  for (const auto& e : j.at("outer")) outer.push_back(exponent_from_json(e));
  Exponent inner = exponent_from_json(j.at("inner"));
  Parity parity = parse_parity(j.at("parity").get<std::string>());
  const json& cs = j.at("c");
  if (cs.size() != outer.size()) throw Error("circuit coefficient count does not match outer set");
  // Coefficients follow the given outer order; the circuit stores sorted order.
  std::vector<std::pair<Exponent, Scalar>> terms;
  for (std::size_t i = 0; i < outer.size(); ++i) terms.emplace_back(outer[i], scalar_from_json(cs[i], exact));
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  CircuitFunction cf;
  cf.circuit = make_circuit(outer, inner, parity, ambient_even);
  for (auto& t : terms) cf.c.push_back(t.second);
  cf.d = scalar_from_json(j.at("d"), exact);
  return cf;
}

}  // namespace scone
