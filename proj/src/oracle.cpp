#include "scone/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scone/circuits.hpp"

namespace scone::oracle {

GridMin grid_min(const SFunction& f, const GridSpec& spec) {
  const std::size_t n = f.n();
  if (spec.box.size() != n) throw Error("grid box dimension does not match");
  if (spec.resolution < 3) throw Error("grid resolution must be at least 3");
  std::vector<std::vector<double>> axes(n);
  for (std::size_t j = 0; j < n; ++j) {
    auto [lo, hi] = spec.box[j];
    if (!(lo <= hi)) throw Error("empty grid interval");
    if (spec.log_scale && lo <= 0) throw Error("log-scale grid needs positive bounds");
    for (int k = 0; k < spec.resolution; ++k) {
      double t = static_cast<double>(k) / (spec.resolution - 1);
      axes[j].push_back(spec.log_scale ? lo * std::pow(hi / lo, t) : lo + t * (hi - lo));
    }
  }
  const bool reflect = !f.support.odd.empty() || spec.log_scale;
  const std::size_t patterns = reflect ? (std::size_t{1} << n) : 1;

  GridMin best{std::numeric_limits<double>::infinity(), {}};
  std::vector<std::size_t> idx(n, 0);
  std::vector<double> x(n);
  for (;;) {
    for (std::size_t mask = 0; mask < patterns; ++mask) {
      for (std::size_t j = 0; j < n; ++j) x[j] = (mask >> j & 1) ? -axes[j][idx[j]] : axes[j][idx[j]];
      double v = evaluate(f, x);
      if (v < best.value) best = {v, x};
    }
    std::size_t j = 0;
    while (j < n && ++idx[j] == axes[j].size()) idx[j++] = 0;
    if (j == n) break;
  }
  if (std::isinf(best.value)) throw Error("function is +inf on the whole grid");
  return best;
}

std::vector<std::vector<Rational>> polytope_vertices(const std::vector<Exponent>& A, const Exponent& beta) {
  std::vector<std::vector<Rational>> out;
  if (A.empty()) return out;
  const std::size_t max_size = std::min(A.size(), A[0].size() + 1);
  std::vector<std::size_t> idx;
  auto visit = [&](auto&& self, std::size_t start) -> void {
    if (!idx.empty()) {
      std::vector<Exponent> pts;
      for (auto i : idx) pts.push_back(A[i]);
      if (!affinely_independent_exps(pts)) return;
      auto sol = try_lambda_unique(pts, beta);
      if (sol && sol->in_hull) {
        std::vector<Rational> full(A.size(), Rational(0));
        for (std::size_t k = 0; k < idx.size(); ++k) full[idx[k]] = sol->lambda[k];
        if (std::find(out.begin(), out.end(), full) == out.end()) out.push_back(std::move(full));
      }
    }
    if (idx.size() == max_size) return;
    for (std::size_t i = start; i < A.size(); ++i) {
      idx.push_back(i);
      self(self, i + 1);
      idx.pop_back();
    }
  };
  visit(visit, 0);
  return out;
}

}  // namespace scone::oracle
