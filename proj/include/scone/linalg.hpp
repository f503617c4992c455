#pragma once

// Small dense linear algebra over an ordered field. Instantiated with
// Rational for exact geometry and with double for solver-side work.

#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "scone/scalar.hpp"

namespace scone {

template <class T>
using Matrix = std::vector<std::vector<T>>;

template <class T>
struct FieldTraits;

template <>
struct FieldTraits<Rational> {
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static bool is_positive(const Rational& x) { return sgn(x) > 0; }
  static bool is_negative(const Rational& x) { return sgn(x) < 0; }
  static double magnitude(const Rational& x) { return std::abs(x.get_d()); }
};

template <>
struct FieldTraits<double> {
  static constexpr double eps = 1e-11;
  static bool is_zero(double x) { return std::abs(x) <= eps; }
  static bool is_positive(double x) { return x > eps; }
  static bool is_negative(double x) { return x < -eps; }
  static double magnitude(double x) { return std::abs(x); }
};

/// Row-reduced echelon form in place. Returns the pivot columns.
template <class T>
std::vector<std::size_t> rref(Matrix<T>& m) {
  using F = FieldTraits<T>;
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t best = rows;
    double best_mag = 0.0;
    for (std::size_t i = r; i < rows; ++i) {
      if (F::is_zero(m[i][c])) continue;
      double mag = F::magnitude(m[i][c]);
      if (best == rows || mag > best_mag) {
        best = i;
        best_mag = mag;
      }
    }
    if (best == rows) continue;
    std::swap(m[r], m[best]);
    T inv = T(1) / m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || F::is_zero(m[i][c])) continue;
      T factor = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= factor * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class T>
std::size_t rank(Matrix<T> m) {
  return rref(m).size();
}

/// Basis of the right null space of `m` (cols = m[0].size()).
template <class T>
std::vector<std::vector<T>> kernel(Matrix<T> m, std::size_t cols) {
  std::vector<std::vector<T>> basis;
  if (m.empty()) {
    for (std::size_t j = 0; j < cols; ++j) {
      std::vector<T> e(cols, T(0));
      e[j] = T(1);
      basis.push_back(std::move(e));
    }
    return basis;
  }
  auto pivots = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<T> v(cols, T(0));
    v[free] = T(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Solves m * x = rhs. Returns nullopt when inconsistent; when the solution is
/// not unique, free variables are set to zero.
template <class T>
std::optional<std::vector<T>> solve(const Matrix<T>& m, const std::vector<T>& rhs) {
  using F = FieldTraits<T>;
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  Matrix<T> aug(rows, std::vector<T>(cols + 1, T(0)));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) aug[i][j] = m[i][j];
    aug[i][cols] = rhs[i];
  }
  auto pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
  for (std::size_t i = pivots.size(); i < rows; ++i)
    if (!F::is_zero(aug[i][cols])) return std::nullopt;
  std::vector<T> x(cols, T(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug[r][cols];
  return x;
}

/// Columns are the lifted points (p, 1); used for affine questions.
template <class T>
Matrix<T> lifted_columns(const std::vector<std::vector<T>>& points, std::size_t dim) {
  Matrix<T> m(dim + 1, std::vector<T>(points.size(), T(0)));
  for (std::size_t j = 0; j < points.size(); ++j) {
    for (std::size_t i = 0; i < dim; ++i) m[i][j] = points[j][i];
    m[dim][j] = T(1);
  }
  return m;
}

template <class T>
bool affinely_independent(const std::vector<std::vector<T>>& points, std::size_t dim) {
  if (points.empty()) return true;
  return rank(lifted_columns(points, dim)) == points.size();
}

}  // namespace scone
