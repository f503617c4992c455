#pragma once

// Random instance generators shared by unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "scone/ag_cert.hpp"
#include "scone/circuits.hpp"
#include "scone/faces.hpp"
#include "scone/oracle.hpp"

namespace gen {

using scone::Exponent;
using scone::Rational;
using scone::Scalar;

inline Exponent E2(long a, long b) { return Exponent{Rational(a), Rational(b)}; }

inline Rational rat(std::mt19937_64& rng, int lo, int hi, int den) {
  std::uniform_int_distribution<int> num(lo * den, hi * den);
  Rational q(num(rng), den);
  q.canonicalize();
  return q;
}

/// Random AG function with n <= 2, exponents in [0, 8], outer coefficients in
/// (0, 3] and inner coefficient in [-3, 3]. The inner exponent lies in conv(outer).
inline scone::AGFunction random_ag(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(1, 2), cnt(2, 4), coin(0, 1), ci(0, 8);
  std::uniform_real_distribution<double> cu(0.1, 3.0), du(-3.0, 3.0);
  for (;;) {
    scone::AGFunction f;
    f.n = static_cast<std::size_t>(dim(rng));
    f.parity = coin(rng) ? scone::Parity::Odd : scone::Parity::Even;
    int m = cnt(rng);
    for (int i = 0; i < m; ++i) {
      Exponent e;
      for (std::size_t j = 0; j < f.n; ++j) e.push_back(coin(rng) ? Rational(ci(rng)) : rat(rng, 0, 8, 3));
      f.outer.push_back(e);
    }
    std::sort(f.outer.begin(), f.outer.end());
    f.outer.erase(std::unique(f.outer.begin(), f.outer.end()), f.outer.end());
    if (f.parity == scone::Parity::Odd) {
      Exponent b;
      for (std::size_t j = 0; j < f.n; ++j) b.emplace_back(ci(rng));
      if (!scone::is_odd_exponent(b)) b[0] += (b[0] == 8 ? -1 : 1);
      f.inner = b;
    } else {
      // Random positive convex combination.
      std::uniform_int_distribution<int> w(1, 4);
      Rational tot(0);
      std::vector<Rational> lam;
      for (std::size_t i = 0; i < f.outer.size(); ++i) {
        lam.emplace_back(w(rng));
        tot += lam.back();
      }
      f.inner.assign(f.n, Rational(0));
      for (std::size_t i = 0; i < f.outer.size(); ++i)
        for (std::size_t j = 0; j < f.n; ++j) f.inner[j] += lam[i] / tot * f.outer[i][j];
    }
    if (std::find(f.outer.begin(), f.outer.end(), f.inner) != f.outer.end()) continue;
    if (!scone::lambda_face(f.outer, f.inner)) continue;
    for (std::size_t i = 0; i < f.outer.size(); ++i) f.c.emplace_back(cu(rng));
    f.d = Scalar(du(rng));
    return f;
  }
}

/// Log-scale grid over |x| in [1e-3, 1e3] with all sign patterns.
inline scone::oracle::GridMin ag_grid_min(const scone::SFunction& f) {
  scone::oracle::GridSpec spec;
  spec.box.assign(f.n(), {1e-3, 1e3});
  spec.resolution = f.n() == 1 ? 2001 : 161;
  spec.log_scale = true;
  return scone::oracle::grid_min(f, spec);
}

/// Random circuit (outer affinely independent, inner in the relative interior).
inline scone::Circuit random_circuit(std::mt19937_64& rng, scone::Parity parity, std::size_t n) {
  std::uniform_int_distribution<int> ci(0, 4), cnt(2, static_cast<int>(n) + 1);
  for (;;) {
    std::vector<Exponent> outer;
    int m = cnt(rng);
    for (int i = 0; i < m; ++i) {
      Exponent e;
      for (std::size_t j = 0; j < n; ++j) e.emplace_back(2 * ci(rng));
      outer.push_back(e);
    }
    if (!scone::affinely_independent_exps(outer)) continue;
    std::sort(outer.begin(), outer.end());
    Exponent b;
    if (parity == scone::Parity::Odd) {
      std::uniform_int_distribution<int> bi(0, 8);
      for (std::size_t j = 0; j < n; ++j) b.emplace_back(bi(rng));
      if (!scone::is_odd_exponent(b)) continue;
    } else {
      std::uniform_int_distribution<int> w(1, 4);
      Rational tot(0);
      std::vector<Rational> lam;
      for (int i = 0; i < m; ++i) {
        lam.emplace_back(w(rng));
        tot += lam.back();
      }
      b.assign(n, Rational(0));
      for (int i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) b[j] += lam[i] / tot * outer[i][j];
    }
    auto sol = scone::try_lambda_unique(outer, b);
    if (!sol || !sol->in_relint) continue;
    return scone::make_circuit(outer, b, parity, outer);
  }
}

}  // namespace gen

namespace gen {

/// Random support (n <= 3, |A| <= 8, |B| <= 3) with integer exponents in [0, 6].
inline scone::Support random_support(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(1, 3), na(2, 8), nb(0, 3), ci(0, 6);
  std::size_t n = static_cast<std::size_t>(dim(rng));
  std::vector<Exponent> A, B;
  int a = na(rng), b = nb(rng);
  for (int i = 0; i < a; ++i) {
    Exponent e;
    for (std::size_t j = 0; j < n; ++j) e.emplace_back(ci(rng));
    A.push_back(e);
  }
  for (int i = 0; i < b; ++i) {
    Exponent e;
    for (std::size_t j = 0; j < n; ++j) e.emplace_back(ci(rng));
    if (scone::is_odd_exponent(e)) B.push_back(e);
  }
  return scone::Support(n, A, B);
}

inline Rational rpow(const Rational& t, const Rational& e) {
  Rational r(1);
  long k = e.get_num().get_si();
  for (long i = 0; i < k; ++i) r *= t;
  return r;
}

/// Random exact dual vector: sums of point functionals at rational points,
/// optionally perturbed, or uniformly random entries.
inline scone::DualVector random_dual(std::mt19937_64& rng, const scone::Support& s) {
  std::uniform_int_distribution<int> kind(0, 2), pts(1, 2), tn(1, 7), sgn(0, 1);
  std::vector<Scalar> v(s.even.size(), Scalar(0)), w(s.odd.size(), Scalar(0));
  int k = kind(rng);
  if (k == 2) {
    for (auto& x : v) x = Scalar(rat(rng, 0, 3, 4) + Rational(1, 8));
    for (auto& x : w) x = Scalar(rat(rng, -3, 3, 4));
    return scone::DualVector(s, v, w);
  }
  int p = pts(rng);
  for (int q = 0; q < p; ++q) {
    std::vector<Rational> t;
    for (std::size_t j = 0; j < s.n; ++j) {
      Rational tj(tn(rng), 4);
      tj.canonicalize();
      if (sgn(rng)) tj = -tj;
      t.push_back(tj);
    }
    for (std::size_t i = 0; i < s.even.size(); ++i) {
      Rational r(1);
      for (std::size_t j = 0; j < s.n; ++j) r *= rpow(abs(t[j]), s.even[i][j]);
      v[i] += Scalar(r);
    }
    for (std::size_t i = 0; i < s.odd.size(); ++i) {
      Rational r(1);
      for (std::size_t j = 0; j < s.n; ++j) r *= rpow(t[j], s.odd[i][j]);
      w[i] += Scalar(r);
    }
  }
  if (k == 1) {
    std::uniform_int_distribution<int> pick(0, static_cast<int>(s.even.size() + s.odd.size()) - 1);
    int i = pick(rng);
    Rational f(sgn(rng) ? 11 : 9, 10);
    if (i < static_cast<int>(s.even.size()))
      v[i] *= Scalar(f);
    else
      w[i - s.even.size()] *= Scalar(f);
  }
  return scone::DualVector(s, v, w);
}

}  // namespace gen

namespace gen {

/// Random S-function over n <= 2 with integer exponents in [0, 8]; the
/// corners 0, 6*1 and 8 e_j carry positive coefficients so most instances
/// are bounded below. Exact coefficients are multiples of 1/8.
inline scone::SFunction random_sfunction(std::mt19937_64& rng, bool exact) {
  std::uniform_int_distribution<int> dim(1, 2), na(2, 5), nb(0, 3), ci(0, 6), coin(0, 2);
  std::uniform_real_distribution<double> cu(0.2, 2.0), du(-2.0, 1.0);
  const std::size_t n = static_cast<std::size_t>(dim(rng));
  std::vector<std::pair<Exponent, Scalar>> ev, od;
  auto sc = [&](double x) { return exact ? Scalar(scone::rational_from_double(std::round(x * 8) / 8)) : Scalar(x); };
  int a = na(rng);
  for (int i = 0; i < a; ++i) {
    Exponent e;
    for (std::size_t j = 0; j < n; ++j) e.emplace_back(2 * (ci(rng) / 2));
    ev.emplace_back(e, sc(coin(rng) ? cu(rng) : du(rng)));
  }
  int b = nb(rng);
  for (int i = 0; i < b; ++i) {
    Exponent e;
    for (std::size_t j = 0; j < n; ++j) e.emplace_back(ci(rng));
    if (scone::is_odd_exponent(e)) od.emplace_back(e, sc(du(rng) * 1.5));
  }
  ev.emplace_back(Exponent(n, Rational(0)), sc(cu(rng)));
  ev.emplace_back(Exponent(n, Rational(6)), sc(cu(rng)));
  for (std::size_t j = 0; j < n; ++j) {
    Exponent e(n, Rational(0));
    e[j] = 8;
    ev.emplace_back(e, sc(cu(rng)));
  }
  return scone::SFunction::from_terms(n, ev, od);
}

/// Instance meeting the simplex hypotheses: even vertices 0, 8 e_j (and for
/// n = 2 optionally a skewed third vertex), negative interior terms.
inline scone::SFunction random_simplex_sfunction(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(1, 2), cnt(1, 3), ci(1, 7), coin(0, 1);
  std::uniform_real_distribution<double> cu(0.3, 2.0), du(-1.5, -0.05);
  const std::size_t n = static_cast<std::size_t>(dim(rng));
  std::vector<Exponent> V{Exponent(n, Rational(0))};
  for (std::size_t j = 0; j < n; ++j) {
    Exponent e(n, Rational(0));
    e[j] = 8;
    V.push_back(e);
  }
  if (n == 2 && coin(rng)) V[2] = E2(2, 8);
  std::vector<std::pair<Exponent, Scalar>> ev, od;
  for (const auto& v : V) ev.emplace_back(v, Scalar(cu(rng)));
  int k = cnt(rng);
  for (int i = 0; i < k; ++i) {
    Exponent e;
    for (std::size_t j = 0; j < n; ++j) e.emplace_back(ci(rng));
    auto sol = scone::try_lambda_unique(V, e);
    if (!sol || !sol->in_relint) continue;
    if (scone::is_odd_exponent(e))
      od.emplace_back(e, Scalar(du(rng)));
    else if (std::find(V.begin(), V.end(), e) == V.end())
      ev.emplace_back(e, Scalar(du(rng)));
  }
  return scone::SFunction::from_terms(n, ev, od);
}

}  // namespace gen
