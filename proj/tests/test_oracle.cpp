#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "scone/circuits.hpp"
#include "scone/oracle.hpp"

using namespace scone;
using namespace th;

TEST_SUITE("oracle") {

TEST_CASE("grid minimum") {
  auto sq = F(1, {{E({0}), 1}, {E({1}), -2}, {E({2}), 1}});
  auto r = oracle::grid_min(sq, {{{-2.0, 2.0}}, 401, false});
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(r.argmin[0]) == doctest::Approx(1.0));

  auto q = F(1, {{E({0}), 1}, {E({2}), -3}, {E({4}), 1}});
  auto s = oracle::grid_min(q, {{{-2.0, 2.0}}, 4001, false});
  CHECK(s.value == doctest::Approx(-1.25).epsilon(1e-5));
  CHECK(s.argmin[0] * s.argmin[0] == doctest::Approx(1.5).epsilon(1e-2));

  auto x = F(1, {{E({0}), 0}}, {{E({1}), 1}});
  CHECK(oracle::grid_min(x, {{{0.0, 3.0}}, 31, false}).value == doctest::Approx(-3.0));

  auto inv = F(1, {{E({-1}), 1}, {E({1}), 1}});
  auto t = oracle::grid_min(inv, {{{0.01, 100.0}}, 2001, true});
  CHECK(t.value == doctest::Approx(2.0).epsilon(1e-4));
  CHECK_THROWS_AS(oracle::grid_min(sq, {{{-1.0, 1.0}}, 2, false}), Error);
}

TEST_CASE("lambda polytope vertices") {
  std::vector<Exponent> A{E({0}), E({2}), E({4})};
  auto v = oracle::polytope_vertices(A, E({2}));
  CHECK(v.size() == 2);
  CHECK(std::find(v.begin(), v.end(), std::vector<Rational>{Q("1/2"), 0, Q("1/2")}) != v.end());
  CHECK(std::find(v.begin(), v.end(), std::vector<Rational>{0, 1, 0}) != v.end());

  auto one = oracle::polytope_vertices({E({0, 0}), E({4, 2}), E({2, 4})}, E({2, 2}));
  REQUIRE(one.size() == 1);
  CHECK(one[0] == std::vector<Rational>{Q("1/3"), Q("1/3"), Q("1/3")});
  CHECK(oracle::polytope_vertices(A, E({5})).empty());

  std::vector<Exponent> B{E({0, 0}), E({6, 0}), E({0, 6}), E({2, 2}), E({4, 1}), E({1, 3})};
  for (const auto& vert : oracle::polytope_vertices(B, E({2, 2}))) {
    std::vector<Exponent> supp;
    for (std::size_t i = 0; i < B.size(); ++i)
      if (sgn(vert[i]) != 0) supp.push_back(B[i]);
    CHECK(affinely_independent_exps(supp));
  }
}

}
