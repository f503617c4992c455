#pragma once

// Brute-force oracles for tests and sanity checks.

#include <utility>
#include <vector>

#include "scone/sfunction.hpp"

namespace scone::oracle {

struct GridSpec {
  std::vector<std::pair<double, double>> box;  // per coordinate; |x| range when log_scale
  int resolution = 101;
  bool log_scale = false;
};

struct GridMin {
  double value;
  std::vector<double> argmin;
};

/// Minimum of f over the grid and its coordinate sign reflections.
GridMin grid_min(const SFunction& f, const GridSpec& spec);

/// Vertices of Lambda(A, beta) as full-length weight vectors, in the order
/// found by subset enumeration, without duplicates. Empty when beta is not in
/// conv(A).
std::vector<std::vector<Rational>> polytope_vertices(const std::vector<Exponent>& A, const Exponent& beta);

}  // namespace scone::oracle
