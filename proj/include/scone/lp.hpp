#pragma once

// Dense two-phase simplex for   min c^T x  s.t.  A x = b, x >= 0.
// Bland's rule keeps it cycle-free; sizes here are a few dozen columns.

#include <cstddef>
#include <vector>

#include "scone/linalg.hpp"

namespace scone {

enum class LpStatus { Optimal, Infeasible, Unbounded };

template <class T>
struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<T> x;
  T objective = T(0);
};

namespace detail {

template <class T>
class Tableau {
 public:
  using F = FieldTraits<T>;

  Tableau(Matrix<T> rows, std::vector<T> rhs, std::vector<std::size_t> basis)
      : a_(std::move(rows)), b_(std::move(rhs)), basis_(std::move(basis)) {}

  // Minimizes cost over the current basis. Returns false when unbounded.
  bool optimize(const std::vector<T>& cost, std::size_t allowed_cols) {
    for (int guard = 0; guard < 100000; ++guard) {
      std::vector<T> reduced = reduced_costs(cost);
      std::size_t enter = allowed_cols;
      for (std::size_t j = 0; j < allowed_cols; ++j) {
        if (F::is_negative(reduced[j]) && !in_basis(j)) {
          enter = j;
          break;
        }
      }
      if (enter == allowed_cols) return true;
      std::size_t leave = a_.size();
      T best_ratio(0);
      for (std::size_t i = 0; i < a_.size(); ++i) {
        if (!F::is_positive(a_[i][enter])) continue;
        T ratio = b_[i] / a_[i][enter];
        if (leave == a_.size() || ratio < best_ratio ||
            (!(best_ratio < ratio) && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == a_.size()) return false;
      pivot(leave, enter);
    }
    throw Error("simplex iteration limit reached");
  }

  void pivot(std::size_t row, std::size_t col) {
    T inv = T(1) / a_[row][col];
    for (auto& v : a_[row]) v *= inv;
    b_[row] *= inv;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (i == row || F::is_zero(a_[i][col])) continue;
      T factor = a_[i][col];
      for (std::size_t j = 0; j < a_[i].size(); ++j) a_[i][j] -= factor * a_[row][j];
      b_[i] -= factor * b_[row];
    }
    basis_[row] = col;
  }

  bool in_basis(std::size_t j) const {
    for (auto k : basis_)
      if (k == j) return true;
    return false;
  }

  std::vector<T> reduced_costs(const std::vector<T>& cost) const {
    std::vector<T> r(cost);
    for (std::size_t i = 0; i < a_.size(); ++i) {
      const T& cb = cost[basis_[i]];
      if (F::is_zero(cb)) continue;
      for (std::size_t j = 0; j < r.size(); ++j) r[j] -= cb * a_[i][j];
    }
    return r;
  }

  Matrix<T>& rows() { return a_; }
  std::vector<T>& rhs() { return b_; }
  std::vector<std::size_t>& basis() { return basis_; }

 private:
  Matrix<T> a_;
  std::vector<T> b_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

template <class T>
LpResult<T> solve_lp(const Matrix<T>& a, const std::vector<T>& b, const std::vector<T>& c) {
  using F = FieldTraits<T>;
  const std::size_t m = a.size();
  const std::size_t n = c.size();
  LpResult<T> result;
  if (m == 0) {
    for (const auto& cj : c)
      if (F::is_negative(cj)) {
        result.status = LpStatus::Unbounded;
        return result;
      }
    result.status = LpStatus::Optimal;
    result.x.assign(n, T(0));
    return result;
  }
  // Phase I: artificials in columns n..n+m-1.
  Matrix<T> rows(m, std::vector<T>(n + m, T(0)));
  std::vector<T> rhs(m);
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    bool flip = F::is_negative(b[i]);
    for (std::size_t j = 0; j < n; ++j) rows[i][j] = flip ? T(-a[i][j]) : a[i][j];
    rows[i][n + i] = T(1);
    rhs[i] = flip ? T(-b[i]) : b[i];
    basis[i] = n + i;
  }
  detail::Tableau<T> tab(std::move(rows), std::move(rhs), std::move(basis));
  std::vector<T> phase1(n + m, T(0));
  for (std::size_t i = 0; i < m; ++i) phase1[n + i] = T(1);
  tab.optimize(phase1, n + m);
  T infeas(0);
  for (std::size_t i = 0; i < m; ++i)
    if (tab.basis()[i] >= n) infeas += tab.rhs()[i];
  if (F::is_positive(infeas)) return result;

  // Drive remaining artificials out; drop redundant rows.
  for (std::size_t i = 0; i < tab.rows().size();) {
    if (tab.basis()[i] < n) {
      ++i;
      continue;
    }
    std::size_t col = n;
    for (std::size_t j = 0; j < n; ++j)
      if (!F::is_zero(tab.rows()[i][j])) {
        col = j;
        break;
      }
    if (col < n) {
      tab.pivot(i, col);
      ++i;
    } else {
      tab.rows().erase(tab.rows().begin() + static_cast<std::ptrdiff_t>(i));
      tab.rhs().erase(tab.rhs().begin() + static_cast<std::ptrdiff_t>(i));
      tab.basis().erase(tab.basis().begin() + static_cast<std::ptrdiff_t>(i));
    }
  }
  std::vector<T> cost(n + m, T(0));
  for (std::size_t j = 0; j < n; ++j) cost[j] = c[j];
  if (!tab.optimize(cost, n)) {
    result.status = LpStatus::Unbounded;
    return result;
  }
  result.status = LpStatus::Optimal;
  result.x.assign(n, T(0));
  for (std::size_t i = 0; i < tab.rows().size(); ++i)
    if (tab.basis()[i] < n) result.x[tab.basis()[i]] = tab.rhs()[i];
  for (std::size_t j = 0; j < n; ++j) result.objective += c[j] * result.x[j];
  return result;
}

}  // namespace scone
