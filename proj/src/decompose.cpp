#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "scone/lp.hpp"
#include "scone/scone_member.hpp"

namespace scone {

namespace {

CircuitFunction make_cf(std::vector<std::pair<Exponent, Scalar>> terms, const Exponent& inner, Parity parity,
                        const Scalar& d, const std::vector<Exponent>& ambient) {
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Exponent> outer;
  CircuitFunction cf;
  for (auto& [e, c] : terms) {
    outer.push_back(e);
    cf.c.push_back(c);
  }
  cf.circuit = make_circuit(outer, inner, parity, ambient);
  cf.d = d;
  return cf;
}

double dot_diff(const Exponent& a, const Exponent& b, const std::vector<double>& y) {
  double r = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) r += Rational(a[j] - b[j]).get_d() * y[j];
  return r;
}

// Rewrites a circuit function over reduced circuits: the circuit is made tight,
// moved to the coordinates of its zero, and split there by an exact LP over
// the reduced circuits inside its hull.
void split_reduced(const CircuitFunction& cf, const std::vector<Exponent>& ambient, CircuitDecomposition& out) {
  const Circuit& C = cf.circuit;
  const std::size_t n = C.inner.size();
  const double theta = circuit_number(cf);
  const double rho = std::min(1.0, std::abs(cf.d.value()) / theta);
  for (std::size_t i = 0; i < C.outer.size(); ++i)
    if (rho < 1.0) out.monomials.push_back({C.outer[i], cf.c[i] * Scalar(1.0 - rho)});
  const double th = rho * theta;  // = |d|

  // Zero of the tight function in log coordinates.
  Eigen::MatrixXd M(C.outer.size(), n);
  Eigen::VectorXd rhs(C.outer.size());
  for (std::size_t i = 0; i < C.outer.size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) M(i, j) = Rational(C.outer[i][j] - C.inner[j]).get_d();
    rhs[i] = std::log(th * C.lambda[i].get_d() / (rho * cf.c[i].value()));
  }
  Eigen::VectorXd ys = M.completeOrthogonalDecomposition().solve(rhs);
  std::vector<double> y(ys.data(), ys.data() + n);

  std::vector<Exponent> Q;
  for (const auto& a : ambient) {
    if (std::find(C.outer.begin(), C.outer.end(), a) != C.outer.end()) continue;
    auto sol = try_lambda_unique(C.outer, a);
    if (sol && sol->in_hull) Q.push_back(a);
  }
  for (const auto& a : C.outer) Q.push_back(a);
  if (C.parity == Parity::Even && std::find(Q.begin(), Q.end(), C.inner) == Q.end()) Q.push_back(C.inner);
  Support sub(n, Q, C.parity == Parity::Odd ? std::vector<Exponent>{C.inner} : std::vector<Exponent>{});

  EnumerateOptions eo;
  eo.reduced_only = true;
  std::vector<Circuit> cands;
  for (auto& c : enumerate_circuits(sub, Parity::Even, eo))
    if (!c.singleton()) cands.push_back(c);
  if (C.parity == Parity::Odd)
    for (auto& c : enumerate_circuits(sub, Parity::Odd, eo)) cands.push_back(c);

  const std::size_t rows = sub.even.size() + (C.parity == Parity::Odd ? 1 : 0);
  Matrix<Rational> A(rows, std::vector<Rational>(cands.size(), Rational(0)));
  std::vector<Rational> b(rows, Rational(0)), cost(cands.size(), Rational(0));
  for (std::size_t i = 0; i < C.outer.size(); ++i) b[*sub.even_index(C.outer[i])] = C.lambda[i];
  if (C.parity == Parity::Even)
    b[*sub.even_index(C.inner)] = -1;
  else
    b[rows - 1] = 1;
  for (std::size_t k = 0; k < cands.size(); ++k) {
    const auto& c = cands[k];
    for (std::size_t i = 0; i < c.outer.size(); ++i) A[*sub.even_index(c.outer[i])][k] += c.lambda[i];
    if (c.parity == Parity::Even)
      A[*sub.even_index(c.inner)][k] -= 1;
    else
      A[rows - 1][k] = 1;
  }
  auto lp = solve_lp(A, b, cost);
  if (lp.status != LpStatus::Optimal) throw Error("no reduced-circuit split found");

  for (std::size_t k = 0; k < cands.size(); ++k) {
    if (sgn(lp.x[k]) == 0) continue;
    const auto& c = cands[k];
    const double mu = lp.x[k].get_d();
    std::vector<std::pair<Exponent, Scalar>> terms;
    for (std::size_t i = 0; i < c.outer.size(); ++i)
      terms.emplace_back(c.outer[i], Scalar(mu * th * c.lambda[i].get_d() / std::exp(dot_diff(c.outer[i], C.inner, y))));
    Scalar d = c.parity == Parity::Odd ? cf.d * Scalar(mu)
                                       : Scalar(-mu * th / std::exp(dot_diff(c.inner, C.inner, y)));
    out.parts.push_back(make_cf(terms, c.inner, c.parity, d, ambient));
  }
}

// Splits one AG part along the vertices of Lambda.
void split_part(const AGPart& part, bool reduced_only, const std::vector<Exponent>& ambient,
                CircuitDecomposition& out) {
  const AGFunction& f = part.f;
  const bool trivial = f.d.sign() == 0 || (f.parity == Parity::Even && f.d.sign() > 0);
  if (trivial) {
    for (std::size_t i = 0; i < f.outer.size(); ++i)
      if (f.c[i].sign() > 0) out.monomials.push_back({f.outer[i], f.c[i]});
    if (f.d.sign() > 0 && f.parity == Parity::Even) out.monomials.push_back({f.inner, f.d});
    return;
  }
  const auto& lam = part.witness.lambda;
  if (lam.size() != f.outer.size()) throw Error("AG part has no product-form witness");

  std::vector<std::size_t> act;
  for (std::size_t i = 0; i < f.outer.size(); ++i) {
    if (lam[i].value() > 1e-14 && f.c[i].sign() > 0)
      act.push_back(i);
    else if (f.c[i].sign() > 0)
      out.monomials.push_back({f.outer[i], f.c[i]});
  }
  std::vector<Exponent> pts;
  for (auto i : act) pts.push_back(f.outer[i]);
  const bool exact = f.all_exact() && std::all_of(act.begin(), act.end(), [&](auto i) { return lam[i].is_exact(); });

  // (mu_j, exact vertex weights on pts)
  std::vector<std::pair<Scalar, std::vector<Rational>>> verts;
  if (exact) {
    std::vector<Rational> l;
    for (auto i : act) l.push_back(lam[i].exact());
    for (auto& [mu, v] : lambda_vertex_decompose(pts, f.inner, l)) verts.emplace_back(Scalar(mu), v);
  } else {
    std::vector<std::vector<double>> P;
    std::vector<double> l;
    double tot = 0.0;
    for (auto i : act) tot += lam[i].value();
    for (auto i : act) {
      P.push_back(to_double(f.outer[i]));
      l.push_back(lam[i].value() / tot);
    }
    for (auto& [mu, v] : lambda_vertex_decompose<double>(P, l)) {
      std::vector<Exponent> S;
      std::vector<std::size_t> pos;
      for (std::size_t k = 0; k < v.size(); ++k)
        if (v[k] > 0) {
          S.push_back(pts[k]);
          pos.push_back(k);
        }
      auto sol = lambda_unique(S, f.inner);
      std::vector<Rational> full(pts.size(), Rational(0));
      for (std::size_t k = 0; k < pos.size(); ++k) full[pos[k]] = sol.lambda[k];
      verts.emplace_back(Scalar(mu), full);
    }
  }

  // Outer coefficients per vertex, and their circuit numbers.
  std::vector<std::vector<Scalar>> cs(verts.size(), std::vector<Scalar>(pts.size(), Scalar(0)));
  std::vector<Scalar> used(pts.size(), Scalar(0));
  for (std::size_t j = 0; j < verts.size(); ++j)
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (sgn(verts[j].second[k]) == 0) continue;
      Scalar lk = exact ? lam[act[k]] : lam[act[k]].inexact();
      cs[j][k] = verts[j].first * Scalar(verts[j].second[k]) * f.c[act[k]] / lk;
      used[k] += cs[j][k];
    }
  for (std::size_t k = 0; k < pts.size(); ++k) {
    Scalar left = f.c[act[k]] - used[k];
    if (left.sign() > 0) {
      out.monomials.push_back({pts[k], left});
    } else if (left.sign() < 0) {
      std::size_t best = 0;
      for (std::size_t j = 1; j < verts.size(); ++j)
        if (cs[j][k].value() > cs[best][k].value()) best = j;
      cs[best][k] += left;
    }
  }
  std::vector<double> th(verts.size());
  double total = 0.0;
  for (std::size_t j = 0; j < verts.size(); ++j) {
    std::vector<double> c, l;
    for (std::size_t k = 0; k < pts.size(); ++k)
      if (sgn(verts[j].second[k]) != 0) {
        c.push_back(cs[j][k].value());
        l.push_back(verts[j].second[k].get_d());
      }
    th[j] = circuit_number(c, l);
    total += th[j];
  }

  auto build = [&](bool exact_d) {
    std::vector<CircuitFunction> res;
    Scalar rest = exact_d ? f.d : f.d.inexact();
    for (std::size_t j = 0; j < verts.size(); ++j) {
      double share = f.d.value() * th[j] / total;
      Scalar dj = j + 1 == verts.size() ? rest : (exact_d ? Scalar(rational_from_double(share)) : Scalar(share));
      rest -= dj;
      std::vector<std::pair<Exponent, Scalar>> terms;
      for (std::size_t k = 0; k < pts.size(); ++k)
        if (sgn(verts[j].second[k]) != 0) terms.emplace_back(pts[k], exact_d ? cs[j][k] : cs[j][k].inexact());
      res.push_back(make_cf(terms, f.inner, f.parity, dj, ambient));
    }
    return res;
  };
  std::vector<CircuitFunction> cfs;
  if (exact) {
    cfs = build(true);
    bool ok = std::all_of(cfs.begin(), cfs.end(), [](const auto& cf) { return circuit_nonnegative(cf); });
    if (!ok) cfs = build(false);
  } else {
    cfs = build(false);
  }
  for (auto& cf : cfs) {
    if (reduced_only && !cf.circuit.reduced() && !cf.circuit.singleton())
      split_reduced(cf, ambient, out);
    else
      out.parts.push_back(std::move(cf));
  }
}

}  // namespace

CircuitDecomposition decompose_to_circuits(const AGDecomposition& dec, bool reduced_only) {
  CircuitDecomposition out;
  out.support = dec.support;
  out.monomials = dec.monomials;
  for (const auto& part : dec.parts) split_part(part, reduced_only, dec.support.even, out);
  return out;
}

}  // namespace scone
