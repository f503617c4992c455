#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scone/linalg.hpp"
#include "scone/sfunction.hpp"

namespace scone {

enum class Parity { Even, Odd };

const char* parity_name(Parity p);
Parity parse_parity(const std::string& s);

/// Result of solving sum l_a a = beta, sum l_a = 1 over an affinely
/// independent set.
struct BarycentricSolve {
  std::vector<Rational> lambda;
  bool in_relint = false;  // all entries strictly positive
  bool in_hull = false;    // all entries non-negative
};

/// Unique barycentric coordinates of beta over A. Throws when A is affinely
/// dependent or beta is not in its affine hull.
BarycentricSolve lambda_unique(const std::vector<Exponent>& A, const Exponent& beta);

/// Same, but returns nullopt instead of throwing for beta outside aff(A).
std::optional<BarycentricSolve> try_lambda_unique(const std::vector<Exponent>& A, const Exponent& beta);

bool affinely_independent_exps(const std::vector<Exponent>& A);

struct Circuit {
  std::vector<Exponent> outer;  // sorted
  Exponent inner;
  Parity parity = Parity::Even;
  std::vector<Rational> lambda;  // aligned with outer, strictly positive
  std::size_t rE = 0;
  std::size_t rO = 0;

  bool singleton() const { return outer.size() == 1; }
  bool reduced() const { return parity == Parity::Even ? rE == 0 : rO == 0; }
};

/// Builds a circuit, counting ambient points of `ambient_even` in conv(outer).
/// Throws if (outer, inner) is not a circuit.
Circuit make_circuit(std::vector<Exponent> outer, const Exponent& inner, Parity parity,
                     const std::vector<Exponent>& ambient_even);

/// (rE, rO) for the given outer set and inner point.
std::pair<std::size_t, std::size_t> reducedness_counts(const std::vector<Exponent>& outer, const Exponent& inner,
                                                       const std::vector<Exponent>& ambient_even);

/// Canonical order: parity, |outer|, outer lexicographically, inner.
bool circuit_less(const Circuit& a, const Circuit& b);

struct EnumerateOptions {
  bool reduced_only = false;
  std::size_t max_outer = 0;  // 0 means n + 1
  std::size_t budget = 200000;
};

/// All circuits of the given parity over the support, canonically ordered.
/// Even circuits include the singletons ({b}, b).
std::vector<Circuit> enumerate_circuits(const Support& s, Parity parity, const EnumerateOptions& opt = {});

struct CircuitFunction {
  Circuit circuit;
  std::vector<Scalar> c;  // aligned with circuit.outer, positive
  Scalar d;

  bool all_exact() const;
};

/// prod (c_a / l_a)^{l_a}.
double circuit_number(const CircuitFunction& cf);
double circuit_number(const std::vector<double>& c, const std::vector<double>& lambda);

/// Compares |d| with the circuit number, exactly when all data is exact.
std::partial_ordering compare_inner_to_theta(const CircuitFunction& cf, double rel_tol = 1e-9);

/// Non-negativity by the circuit number test.
bool circuit_nonnegative(const CircuitFunction& cf, double rel_tol = 1e-9);

/// Splits a point of Lambda(A, beta) into a convex combination of vertices.
/// Works over Rational or double; entries of the input must be >= 0 and
/// satisfy the moment equations.
template <class T>
std::vector<std::pair<T, std::vector<T>>> lambda_vertex_decompose(const std::vector<std::vector<T>>& A,
                                                                   const std::vector<T>& lambda);
std::vector<std::pair<Rational, std::vector<Rational>>> lambda_vertex_decompose(const std::vector<Exponent>& A,
                                                                                 const Exponent& beta,
                                                                                 const std::vector<Rational>& lambda);

enum class ExtremeKind { ExtremeEven, ExtremeOdd, ExtremeSingle, NotExtreme };
const char* extreme_kind_name(ExtremeKind k);

struct ExtremalityLabel {
  ExtremeKind kind = ExtremeKind::NotExtreme;
  std::string reason;
};

/// Ray of |x|^b + sign * x^b with sign in {-1, 0, 1}.
struct MonomialRay {
  Exponent beta;
  int sign = 0;
};

ExtremalityLabel classify_extreme(const CircuitFunction& cf, const Support& ambient, double rel_tol = 1e-9);
ExtremalityLabel classify_extreme(const MonomialRay& ray, const Support& ambient);

json circuit_to_json(const Circuit& c);
json circuit_function_to_json(const CircuitFunction& cf);
CircuitFunction circuit_function_from_json(const json& j, const std::vector<Exponent>& ambient_even, bool exact);

// ---------------------------------------------------------------------------

template <class T>
std::vector<std::pair<T, std::vector<T>>> lambda_vertex_decompose(const std::vector<std::vector<T>>& A,
                                                                   const std::vector<T>& lambda) {
  using F = FieldTraits<T>;
  const std::size_t m = A.size();
  const std::size_t dim = m ? A[0].size() : 0;
  auto support_of = [&](const std::vector<T>& x) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < m; ++i)
      if (!F::is_zero(x[i])) s.push_back(i);
    return s;
  };
  auto clean = [&](std::vector<T>& x) {
    for (auto& xi : x)
      if (F::is_zero(xi)) xi = T(0);
  };
  // Moves x along kernel directions until its support is affinely independent.
  auto push_to_vertex = [&](std::vector<T> x) {
    for (;;) {
      auto s = support_of(x);
      std::vector<std::vector<T>> pts;
      for (auto i : s) pts.push_back(A[i]);
      auto ker = kernel(lifted_columns(pts, dim), s.size());
      if (ker.empty()) return x;
      std::vector<T> mu = ker.front();
      bool has_neg = false;
      for (const auto& v : mu)
        if (F::is_negative(v)) has_neg = true;
      if (!has_neg)
        for (auto& v : mu) v = -v;
      std::size_t arg = s.size();
      T best(0);
      for (std::size_t k = 0; k < s.size(); ++k) {
        if (!F::is_negative(mu[k])) continue;
        T t = x[s[k]] / T(-mu[k]);
        if (arg == s.size() || t < best) {
          arg = k;
          best = t;
        }
      }
      for (std::size_t k = 0; k < s.size(); ++k) x[s[k]] += best * mu[k];
      x[s[arg]] = T(0);
      clean(x);
    }
  };

  std::vector<std::pair<T, std::vector<T>>> out;
  std::vector<T> cur = lambda;
  clean(cur);
  T weight(1);
  for (std::size_t guard = 0;; ++guard) {
    if (guard > m + 1) throw Error("vertex decomposition did not terminate");
    std::vector<T> v = push_to_vertex(cur);
    std::vector<T> diff(m);
    bool same = true;
    for (std::size_t i = 0; i < m; ++i) {
      diff[i] = cur[i] - v[i];
      if (!F::is_zero(diff[i])) same = false;
    }
    if (same) {
      out.emplace_back(weight, v);
      break;
    }
    // cur = theta v + (1 - theta) next with next = cur + s (cur - v).
    std::size_t arg = m;
    T s(0);
    for (std::size_t i = 0; i < m; ++i) {
      if (!F::is_negative(diff[i])) continue;
      T t = cur[i] / T(-diff[i]);
      if (arg == m || t < s) {
        arg = i;
        s = t;
      }
    }
    if (arg == m) throw Error("vertex decomposition failed: no boundary step");
    std::vector<T> next(m);
    for (std::size_t i = 0; i < m; ++i) next[i] = cur[i] + s * diff[i];
    next[arg] = T(0);
    clean(next);
    T theta = s / (T(1) + s);
    out.emplace_back(weight * theta, v);
    weight = weight / (T(1) + s);
    cur = std::move(next);
  }
  // Merge repeated vertices.
  std::vector<std::pair<T, std::vector<T>>> merged;
  for (auto& [w, v] : out) {
    if (!F::is_positive(w)) continue;
    bool found = false;
    for (auto& [w2, v2] : merged) {
      bool eq = true;
      for (std::size_t i = 0; i < m; ++i)
        if (!F::is_zero(v[i] - v2[i])) eq = false;
      if (eq) {
        w2 += w;
        found = true;
        break;
      }
    }
    if (!found) merged.emplace_back(w, v);
  }
  return merged;
}

}  // namespace scone
