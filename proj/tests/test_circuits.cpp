#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "scone/circuits.hpp"
#include "scone/oracle.hpp"

using namespace scone;
using namespace th;

namespace {

CircuitFunction cf_of(std::vector<Exponent> outer, Exponent inner, Parity p, std::vector<Scalar> c, Scalar d,
                      const std::vector<Exponent>& ambient) {
  CircuitFunction cf;
  cf.circuit = make_circuit(std::move(outer), inner, p, ambient);
  cf.c = std::move(c);
  cf.d = d;
  return cf;
}

std::vector<std::pair<std::vector<Exponent>, Exponent>> shape(const std::vector<Circuit>& cs) {
  std::vector<std::pair<std::vector<Exponent>, Exponent>> r;
  for (const auto& c : cs) r.emplace_back(c.outer, c.inner);
  return r;
}

}  // namespace

TEST_SUITE("circuits") {

TEST_CASE("unique barycentric weights") {
  auto r = lambda_unique({E({0}), E({4})}, E({1}));
  CHECK(r.lambda == std::vector<Rational>{Q("3/4"), Q("1/4")});
  CHECK(r.in_relint);
  auto m = lambda_unique({E({0, 0}), E({4, 2}), E({2, 4})}, E({2, 2}));
  CHECK(m.lambda == std::vector<Rational>{Q("1/3"), Q("1/3"), Q("1/3")});
  auto o = lambda_unique({E({0}), E({2})}, E({3}));
  CHECK(o.lambda == std::vector<Rational>{Q("-1/2"), Q("3/2")});
  CHECK_FALSE(o.in_relint);
  CHECK_FALSE(o.in_hull);
  CHECK_THROWS_AS(lambda_unique({E({0}), E({1}), E({2})}, E({1})), Error);
  CHECK_THROWS_AS(lambda_unique({E({0, 0}), E({2, 0})}, E({1, 1})), Error);
}

TEST_CASE("enumeration on a small line support") {
  Support s(1, {E({0}), E({1}), E({2})}, {E({1})});
  auto even = enumerate_circuits(s, Parity::Even);
  using Shape = std::vector<std::pair<std::vector<Exponent>, Exponent>>;
  CHECK(shape(even) == Shape{{{E({0})}, E({0})}, {{E({1})}, E({1})}, {{E({2})}, E({2})}, {{E({0}), E({2})}, E({1})}});
  auto odd = enumerate_circuits(s, Parity::Odd);
  CHECK(shape(odd) == Shape{{{E({1})}, E({1})}, {{E({0}), E({2})}, E({1})}});
  CHECK(odd[1].rO == 1);
  CHECK(even[3].rE == 0);

  Support t(1, {E({0}), E({2}), E({4})}, {E({1})});
  auto all = enumerate_circuits(t, Parity::Odd);
  auto red = enumerate_circuits(t, Parity::Odd, {.reduced_only = true});
  CHECK(shape(all) == Shape{{{E({0}), E({2})}, E({1})}, {{E({0}), E({4})}, E({1})}});
  CHECK(shape(red) == Shape{{{E({0}), E({2})}, E({1})}});

  Support single(2, {E({3, 1})}, {});
  auto only = enumerate_circuits(single, Parity::Even);
  REQUIRE(only.size() == 1);
  CHECK(only[0].singleton());
}

TEST_CASE("enumeration count on {0..m} matches brute force") {
  for (int m = 1; m <= 7; ++m) {
    std::vector<Exponent> pts;
    for (int i = 0; i <= m; ++i) pts.push_back(E({i}));
    Support s(1, pts, {});
    auto cs = enumerate_circuits(s, Parity::Even);
    std::size_t brute = static_cast<std::size_t>(m + 1);
    for (int i = 0; i <= m; ++i)
      for (int j = i + 1; j <= m; ++j)
        for (int k = j + 1; k <= m; ++k) ++brute;
    CHECK(cs.size() == brute);
    for (const auto& c : cs) {
      Rational tot(0), mom(0);
      for (std::size_t a = 0; a < c.outer.size(); ++a) {
        CHECK(sgn(c.lambda[a]) > 0);
        tot += c.lambda[a];
        mom += c.lambda[a] * c.outer[a][0];
      }
      CHECK(tot == 1);
      CHECK(mom == c.inner[0]);
    }
    CHECK(std::is_sorted(cs.begin(), cs.end(), circuit_less));
  }
}

TEST_CASE("reducedness monotone under removal of ambient points") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> coord(0, 6);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Exponent> pts;
    for (int i = 0; i < 7; ++i) pts.push_back(E({2 * coord(rng), 2 * coord(rng)}));
    Support s(2, pts, {});
    for (const auto& c : enumerate_circuits(s, Parity::Even)) {
      std::vector<Exponent> fewer;
      for (const auto& a : s.even)
        if (std::find(c.outer.begin(), c.outer.end(), a) != c.outer.end() || a == c.inner || (rng() & 1)) fewer.push_back(a);
      auto [rE, rO] = reducedness_counts(c.outer, c.inner, fewer);
      CHECK(rE <= c.rE);
      CHECK(rO <= c.rO);
    }
  }
}

TEST_CASE("circuit numbers") {
  std::vector<Exponent> amb{E({0}), E({2}), E({4})};
  auto a = cf_of({E({0}), E({4})}, E({1}), Parity::Odd, {1, 1}, 0, amb);
  CHECK(circuit_number(a) == doctest::Approx(4 * std::pow(3.0, -0.75)).epsilon(1e-14));
  CHECK(circuit_number(a) == doctest::Approx(1.754765).epsilon(1e-6));
  auto b = cf_of({E({0}), E({2})}, E({1}), Parity::Odd, {2.0 / 3, 2.0 / 3 * std::sqrt(3.0)}, 0, amb);
  CHECK(circuit_number(b) == doctest::Approx(4 * std::pow(3.0, -0.75)).epsilon(1e-14));
  std::vector<Exponent> mot{E({0, 0}), E({4, 2}), E({2, 4}), E({2, 2})};
  auto m = cf_of({E({0, 0}), E({4, 2}), E({2, 4})}, E({2, 2}), Parity::Even, {1, 1, 1}, -3, mot);
  // (1/(1/3))^(1/3) three times.
  double hand = std::pow(3.0, 1.0 / 3) * std::pow(3.0, 1.0 / 3) * std::pow(3.0, 1.0 / 3);
  CHECK(circuit_number(m) == doctest::Approx(hand).epsilon(1e-14));
  CHECK(compare_inner_to_theta(m) == 0);
  CHECK(circuit_nonnegative(m));
  m.d = Rational(-301, 100);
  CHECK_FALSE(circuit_nonnegative(m));
}

TEST_CASE("circuit number is homogeneous and superadditive") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  std::vector<double> lam{0.2, 0.5, 0.3};
  for (int k = 0; k < 100; ++k) {
    std::vector<double> c{u(rng), u(rng), u(rng)}, c2{u(rng), u(rng), u(rng)};
    double t = u(rng);
    std::vector<double> tc{t * c[0], t * c[1], t * c[2]};
    CHECK(std::abs(circuit_number(tc, lam) - t * circuit_number(c, lam)) <= 1e-12 * circuit_number(tc, lam));
    // Proportional summands: equality.
    double s = u(rng);
    std::vector<double> sc{s * c[0], s * c[1], s * c[2]}, sum{c[0] + sc[0], c[1] + sc[1], c[2] + sc[2]};
    double lhs = circuit_number(c, lam) + circuit_number(sc, lam);
    CHECK(std::abs(lhs - circuit_number(sum, lam)) <= 1e-9 * lhs);
    // Generic summands: strict.
    std::vector<double> sum2{c[0] + c2[0], c[1] + c2[1], c[2] + c2[2]};
    CHECK(circuit_number(c, lam) + circuit_number(c2, lam) < circuit_number(sum2, lam));
  }
}

TEST_CASE("vertex decomposition of barycentric weights") {
  std::vector<Exponent> A{E({0}), E({2}), E({4})};
  std::vector<Rational> lam{Q("1/4"), Q("1/2"), Q("1/4")};
  auto parts = lambda_vertex_decompose(A, E({2}), lam);
  auto verts = oracle::polytope_vertices(A, E({2}));
  Rational tot(0);
  std::vector<Rational> sum(3, Rational(0));
  for (const auto& [mu, v] : parts) {
    CHECK(sgn(mu) > 0);
    tot += mu;
    CHECK(std::find(verts.begin(), verts.end(), v) != verts.end());
    for (int i = 0; i < 3; ++i) sum[i] += mu * v[i];
  }
  CHECK(tot == 1);
  CHECK(sum == lam);
  CHECK(parts.size() == 2);

  auto same = lambda_vertex_decompose({E({0}), E({4})}, E({1}), {Q("3/4"), Q("1/4")});
  REQUIRE(same.size() == 1);
  CHECK(same[0].first == 1);
  CHECK_THROWS_AS(lambda_vertex_decompose(A, E({2}), {Q("1/2"), Q("1/2"), 0}), Error);

  // Random 2-d instances.
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> w(1, 5);
  std::vector<Exponent> B{E({0, 0}), E({6, 0}), E({0, 6}), E({2, 2}), E({4, 1}), E({1, 3})};
  for (int k = 0; k < 30; ++k) {
    std::vector<Rational> l;
    Rational t(0);
    for (int i = 0; i < 6; ++i) {
      l.emplace_back(w(rng));
      t += l.back();
    }
    Exponent b(2, Rational(0));
    for (int i = 0; i < 6; ++i) {
      l[i] /= t;
      for (int j = 0; j < 2; ++j) b[j] += l[i] * B[i][j];
    }
    auto ps = lambda_vertex_decompose(B, b, l);
    std::vector<Rational> s(6, Rational(0));
    for (const auto& [mu, v] : ps) {
      std::vector<Exponent> supp;
      for (int i = 0; i < 6; ++i)
        if (sgn(v[i]) != 0) supp.push_back(B[i]);
      CHECK(affinely_independent_exps(supp));
      for (int i = 0; i < 6; ++i) s[i] += mu * v[i];
    }
    CHECK(s == l);
  }
}

TEST_CASE("extreme ray classification on the line example") {
  Support s(1, {E({0}), E({1}), E({2})}, {E({1})});
  const double a = 1.5, b = 0.5;
  auto ev = cf_of({E({0}), E({2})}, E({1}), Parity::Even, {a * a, b * b}, -2 * a * b, s.even);
  CHECK(classify_extreme(ev, s).kind == ExtremeKind::ExtremeEven);
  auto od = cf_of({E({0}), E({2})}, E({1}), Parity::Odd, {a * a, b * b}, 2 * a * b, s.even);
  auto lab = classify_extreme(od, s);
  CHECK(lab.kind == ExtremeKind::NotExtreme);
  CHECK(lab.reason.find("rO = 1") != std::string::npos);
  CHECK(classify_extreme(MonomialRay{E({1}), 0}, s).kind == ExtremeKind::NotExtreme);
  CHECK(classify_extreme(MonomialRay{E({1}), 1}, s).kind == ExtremeKind::ExtremeSingle);
  CHECK(classify_extreme(MonomialRay{E({1}), -1}, s).kind == ExtremeKind::ExtremeSingle);
  CHECK(classify_extreme(MonomialRay{E({0}), 0}, s).kind == ExtremeKind::ExtremeSingle);
  CHECK_THROWS_AS(classify_extreme(MonomialRay{E({0}), 1}, s), Error);

  // Exact boundary: 1 - 2|x| + x^2.
  auto ex = cf_of({E({0}), E({2})}, E({1}), Parity::Even, {1, 1}, -2, s.even);
  CHECK(classify_extreme(ex, s).kind == ExtremeKind::ExtremeEven);
  ex.d = Q("-199/100");
  CHECK(classify_extreme(ex, s).kind == ExtremeKind::NotExtreme);
}

TEST_CASE("circuit json round trip") {
  std::vector<Exponent> amb{E({0}), E({2}), E({4})};
  auto a = cf_of({E({0}), E({4})}, E({1}), Parity::Odd, {1, Q("1/2")}, Q("-3/2"), amb);
  auto j = circuit_function_to_json(a);
  CHECK(j["lambda"] == json::array({"3/4", "1/4"}));
  auto b = circuit_function_from_json(j, amb, false);
  CHECK(b.circuit.outer == a.circuit.outer);
  CHECK(b.c[1].exact() == Q("1/2"));
  CHECK(b.d.exact() == Q("-3/2"));
  CHECK(b.circuit.rO == 1);
}

}
