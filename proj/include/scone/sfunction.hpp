#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "scone/scalar.hpp"

namespace scone {

using json = nlohmann::json;

/// Exponent vector with exact rational coordinates.
using Exponent = std::vector<Rational>;

bool is_odd_exponent(const Exponent& e);
std::vector<double> to_double(const Exponent& e);
std::string format_exponent(const Exponent& e);

/// Exponent sets (A, B). Both lists are kept sorted and duplicate free.
struct Support {
  std::size_t n = 0;
  std::vector<Exponent> even;
  std::vector<Exponent> odd;

  Support() = default;
  Support(std::size_t dim, std::vector<Exponent> evens, std::vector<Exponent> odds);

  std::optional<std::size_t> even_index(const Exponent& e) const;
  std::optional<std::size_t> odd_index(const Exponent& e) const;
  std::size_t dimension() const { return even.size() + odd.size(); }

  friend bool operator==(const Support&, const Support&) = default;
};

/// f = sum c_a |x|^a + sum d_b x^b, coefficients aligned with the support lists.
struct SFunction {
  Support support;
  std::vector<Scalar> c;
  std::vector<Scalar> d;

  SFunction() = default;
  explicit SFunction(Support s);
  SFunction(Support s, std::vector<Scalar> cs, std::vector<Scalar> ds);

  /// Builds the support from the given terms; repeated exponents are summed.
  static SFunction from_terms(std::size_t n, const std::vector<std::pair<Exponent, Scalar>>& even,
                              const std::vector<std::pair<Exponent, Scalar>>& odd);

  std::size_t n() const { return support.n; }
  bool all_exact() const;
  /// Largest coefficient magnitude (at least 1e-300).
  double scale() const;
  SFunction inexact() const;
  SFunction exactified() const;

  Scalar even_coeff(const Exponent& e) const;
  Scalar odd_coeff(const Exponent& e) const;
};

/// Functional (v, w) on the coefficient space of a support.
struct DualVector {
  Support support;
  std::vector<Scalar> v;
  std::vector<Scalar> w;

  DualVector() = default;
  DualVector(Support s, std::vector<Scalar> vs, std::vector<Scalar> ws);
  bool all_exact() const;
};

/// Value of |x|^a (or x^a for integer a); +inf when a zero coordinate meets a
/// negative exponent.
double abs_power(const std::vector<double>& x, const Exponent& e);
double signed_power(const std::vector<double>& x, const Exponent& e);

/// f(x); +inf when a term with nonzero coefficient blows up at a zero coordinate.
double evaluate(const SFunction& f, const std::vector<double>& x);

Scalar pair(const DualVector& u, const SFunction& f);

/// Dual vector of point evaluation at x (v_a = |x|^a, w_b = x^b).
DualVector point_functional(const Support& s, const std::vector<double>& x);

// JSON. Numbers given as integers or strings ("p/q", "0.25") are exact;
// JSON floats are inexact unless `exact` is set, in which case they are
// converted through their shortest decimal form.
Scalar scalar_from_json(const json& j, bool exact);
json scalar_to_json(const Scalar& s);
Exponent exponent_from_json(const json& j);
json exponent_to_json(const Exponent& e);

SFunction parse_sfunction(const json& doc, bool exact = false);
json serialize_sfunction(const SFunction& f);
DualVector parse_dual_vector(const json& doc, bool exact = false);
json serialize_dual_vector(const DualVector& u);

}  // namespace scone
