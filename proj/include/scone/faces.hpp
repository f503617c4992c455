#pragma once

// Exact LP helpers around Lambda(A, b) = {l >= 0 : sum l = 1, sum l_a a = b}.

#include <cstddef>
#include <optional>
#include <vector>

#include "scone/sfunction.hpp"

namespace scone {

struct LambdaFace {
  std::vector<std::size_t> face;     // indices a with l_a > 0 for some l in Lambda
  std::vector<Rational> interior;    // a point of Lambda positive exactly on `face`
};

/// nullopt when Lambda(A, b) is empty.
std::optional<LambdaFace> lambda_face(const std::vector<Exponent>& A, const Exponent& beta);

/// tau with (a - b)^T tau = 0 for a in the face and <= -1 for the others.
/// With an empty face this strictly separates b from conv(A).
std::vector<Rational> exposing_direction(const std::vector<Exponent>& A, const Exponent& beta,
                                         const std::vector<std::size_t>& face);

/// Orthonormal basis (columns) of span{a - b : a in pts}, in double.
std::vector<std::vector<double>> difference_basis(const std::vector<Exponent>& pts, const Exponent& beta);

}  // namespace scone
