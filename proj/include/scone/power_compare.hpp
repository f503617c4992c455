#pragma once

#include <compare>
#include <vector>

#include "scone/scalar.hpp"

namespace scone {

/// Compares |target| with prod bases[i]^lambda[i] exactly. The weights must be
/// non-negative rationals summing to one; zero weights are skipped (0^0 = 1).
std::strong_ordering power_compare_exact(const Rational& target, const std::vector<Rational>& bases,
                                         const std::vector<Rational>& lambda);

}  // namespace scone
