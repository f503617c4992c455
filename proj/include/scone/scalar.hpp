#pragma once

#include <compare>
#include <concepts>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace scone {

using Rational = mpq_class;

/// Raised for malformed inputs and violated preconditions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "p/q", an integer, or a finite decimal such as "-1.75" or "2e-3"
/// into an exact rational.
Rational parse_rational(std::string_view text);

/// "p/q", or "p" when the denominator is one.
std::string format_rational(const Rational& q);

/// A real coefficient carried in double precision, optionally backed by an
/// exact rational. Arithmetic stays exact while both operands are exact.
class Scalar {
 public:
  Scalar() : value_(0.0), exact_(Rational(0)) {}
  Scalar(double v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  template <std::integral I>
  Scalar(I v) : value_(static_cast<double>(v)), exact_(Rational(static_cast<long>(v))) {}  // NOLINT
  Scalar(const Rational& q) : value_(q.get_d()), exact_(q) {}  // NOLINT

  double value() const { return value_; }
  bool is_exact() const { return exact_.has_value(); }
  const Rational& exact() const {
    if (!exact_) throw Error("scalar has no exact value");
    return *exact_;
  }

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  /// Exact comparison when both sides are exact, double comparison otherwise.
  friend std::partial_ordering operator<=>(const Scalar& a, const Scalar& b);
  friend bool operator==(const Scalar& a, const Scalar& b);

  int sign() const;
  bool is_zero() const { return sign() == 0; }
  Scalar abs() const { return sign() < 0 ? -*this : *this; }

  /// Drops the exact backing.
  Scalar inexact() const { return Scalar(value_); }

 private:
  double value_;
  std::optional<Rational> exact_;
};

/// Exact rational of the shortest decimal representation of `v`
/// (so 0.1 becomes 1/10).
Rational rational_from_double(double v);

}  // namespace scone
