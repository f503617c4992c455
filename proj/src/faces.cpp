#include "scone/faces.hpp"

#include <algorithm>

#include <Eigen/Dense>

#include "scone/lp.hpp"

namespace scone {

std::optional<LambdaFace> lambda_face(const std::vector<Exponent>& A, const Exponent& beta) {
  const std::size_t m = A.size(), n = beta.size();
  if (m == 0) return std::nullopt;
  Matrix<Rational> rows(n + 1, std::vector<Rational>(m, Rational(0)));
  std::vector<Rational> rhs(n + 1);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) rows[j][i] = A[i][j];
    rhs[j] = beta[j];
  }
  for (std::size_t i = 0; i < m; ++i) rows[n][i] = 1;
  rhs[n] = 1;

  std::vector<bool> in_face(m, false);
  std::vector<std::vector<Rational>> sols;
  for (std::size_t a = 0; a < m; ++a) {
    if (in_face[a]) continue;
    std::vector<Rational> cost(m, Rational(0));
    cost[a] = -1;
    auto r = solve_lp(rows, rhs, cost);
    if (r.status == LpStatus::Infeasible) return std::nullopt;
    if (sgn(r.x[a]) <= 0) continue;
    for (std::size_t i = 0; i < m; ++i)
      if (sgn(r.x[i]) > 0) in_face[i] = true;
    sols.push_back(std::move(r.x));
  }
  LambdaFace out;
  for (std::size_t i = 0; i < m; ++i)
    if (in_face[i]) out.face.push_back(i);
  if (sols.empty()) {
    // Only possible when every feasible point is zero; cannot happen as sum l = 1.
    throw Error("lambda face computation failed");
  }
  out.interior.assign(m, Rational(0));
  for (const auto& s : sols)
    for (std::size_t i = 0; i < m; ++i) out.interior[i] += s[i];
  Rational k(static_cast<long>(sols.size()));
  for (auto& x : out.interior) x /= k;
  return out;
}

std::vector<Rational> exposing_direction(const std::vector<Exponent>& A, const Exponent& beta,
                                         const std::vector<std::size_t>& face) {
  const std::size_t m = A.size(), n = beta.size();
  std::vector<bool> in_face(m, false);
  for (auto i : face) in_face[i] = true;
  std::size_t slacks = m - face.size();
  std::size_t cols = 2 * n + slacks;
  Matrix<Rational> rows;
  std::vector<Rational> rhs;
  std::size_t s = 0;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Rational> row(cols, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
      Rational diff = A[i][j] - beta[j];
      row[j] = diff;
      row[n + j] = -diff;
    }
    if (in_face[i]) {
      rhs.push_back(0);
    } else {
      row[2 * n + s++] = 1;
      rhs.push_back(-1);
    }
    rows.push_back(std::move(row));
  }
  // Small tau preferred: minimize the l1 norm.
  std::vector<Rational> cost(cols, Rational(0));
  for (std::size_t j = 0; j < 2 * n; ++j) cost[j] = 1;
  auto r = solve_lp(rows, rhs, cost);
  if (r.status != LpStatus::Optimal) throw Error("no exposing direction for the face");
  std::vector<Rational> tau(n);
  for (std::size_t j = 0; j < n; ++j) tau[j] = r.x[j] - r.x[n + j];
  return tau;
}

std::vector<std::vector<double>> difference_basis(const std::vector<Exponent>& pts, const Exponent& beta) {
  const std::size_t n = beta.size();
  std::vector<std::vector<double>> basis;
  if (pts.empty()) return basis;
  Eigen::MatrixXd M(n, pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) M(j, i) = Rational(pts[i][j] - beta[j]).get_d();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  double top = sv.size() ? sv(0) : 0.0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) <= 1e-10 * std::max(1.0, top)) break;
    std::vector<double> col(n);
    for (std::size_t j = 0; j < n; ++j) col[j] = svd.matrixU()(j, k);
    basis.push_back(std::move(col));
  }
  return basis;
}

}  // namespace scone
