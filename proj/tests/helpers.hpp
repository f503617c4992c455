#pragma once

#include <cmath>
#include <initializer_list>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "scone/ag_cert.hpp"
#include "scone/sfunction.hpp"

namespace th {

using scone::Exponent;
using scone::Rational;
using scone::Scalar;

inline Rational Q(const char* s) { return scone::parse_rational(s); }

inline Exponent E(std::initializer_list<long> xs) {
  Exponent e;
  for (long x : xs) e.emplace_back(x);
  return e;
}

inline Exponent EQ(std::initializer_list<const char*> xs) {
  Exponent e;
  for (auto x : xs) e.push_back(Q(x));
  return e;
}

using Terms = std::vector<std::pair<Exponent, Scalar>>;

inline scone::SFunction F(std::size_t n, const Terms& even, const Terms& odd = {}) {
  return scone::SFunction::from_terms(n, even, odd);
}

inline scone::AGFunction ag(std::size_t n, scone::Parity p, std::vector<Exponent> outer, std::vector<Scalar> c,
                            Exponent inner, Scalar d) {
  scone::AGFunction f;
  f.n = n;
  f.parity = p;
  f.outer = std::move(outer);
  f.c = std::move(c);
  f.inner = std::move(inner);
  f.d = d;
  return f;
}

inline double theta_1d() { return 4.0 * std::pow(3.0, -0.75); }

}  // namespace th
