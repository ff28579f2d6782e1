#include <doctest.h>

#include <numbers>
#include <numeric>
#include <set>

#include "convexchains/errors.hpp"
#include "convexchains/lattice.hpp"

using namespace convexchains;

TEST_CASE("make_direction validates coprimality and sign") {
  CHECK(make_direction(2, 3) == Direction{2, 3});
  CHECK(make_direction(0, 1) == Direction{0, 1});
  CHECK(make_direction(1, 0) == Direction{1, 0});
  CHECK_THROWS_AS(make_direction(2, 4), DomainError);
  CHECK_THROWS_AS(make_direction(0, 0), DomainError);
  CHECK_THROWS_AS(make_direction(0, 2), DomainError);
  CHECK_THROWS_AS(make_direction(-1, 2), DomainError);
  CHECK(is_direction(1, 1));
  CHECK_FALSE(is_direction(3, 3));
}

TEST_CASE("slope order puts (1,0) first and (0,1) last") {
  CHECK(slope_less({1, 0}, {5, 1}));
  CHECK(slope_less({2, 1}, {1, 1}));
  CHECK(slope_less({1, 1}, {0, 1}));
  CHECK_FALSE(slope_less({1, 1}, {1, 1}));
}

TEST_CASE("enumerate_directions matches a gcd filter over the triangle") {
  for (std::int64_t m : {1, 2, 5, 12, 30}) {
    const auto dirs = enumerate_directions(m);
    std::set<Direction> expected;
    for (std::int64_t a = 0; a <= m; ++a) {
      for (std::int64_t b = 0; a + b <= m; ++b) {
        if (std::gcd(a, b) == 1) expected.insert({a, b});
      }
    }
    CHECK(dirs.size() == expected.size());
    CHECK(std::set<Direction>(dirs.begin(), dirs.end()) == expected);
    for (std::size_t i = 1; i < dirs.size(); ++i) CHECK(slope_less(dirs[i - 1], dirs[i]));
  }
}

TEST_CASE("shells list phi(m) directions in increasing x1") {
  for (std::int64_t m = 1; m <= 40; ++m) {
    std::vector<Direction> shell;
    for_each_in_shell(m, [&](Direction d) { shell.push_back(d); });
    std::int64_t phi = 0;
    for (std::int64_t k = 1; k <= m; ++k) phi += std::gcd(k, m) == 1;
    CHECK(static_cast<std::int64_t>(shell.size()) == (m == 1 ? 2 : phi));
    for (std::size_t i = 1; i < shell.size(); ++i) CHECK(shell[i - 1].x1 < shell[i].x1);
  }
}

TEST_CASE("direction density on small boxes") {
  CHECK(direction_density(1) == doctest::Approx(3.0 / 4.0));
  CHECK(direction_density(2) == doctest::Approx(5.0 / 9.0));
  // tends to 1/zeta(2)
  CHECK(direction_density(2000) == doctest::Approx(6.0 / (std::numbers::pi * std::numbers::pi)).epsilon(2e-3));
}

TEST_CASE("X_n aggregate against direct summation") {
  for (std::int64_t n : {1, 2, 3, 7, 25, 100}) {
    std::int64_t card = 0, s1 = 0, s2 = 0;
    for (std::int64_t a = 0; a <= n; ++a) {
      for (std::int64_t b = 0; a + b <= n; ++b) {
        if (std::gcd(a, b) == 1) {
          ++card;
          s1 += a;
          s2 += b;
        }
      }
    }
    const XnAggregate agg = xn_aggregate(n);
    CHECK(agg.cardinality == card);
    CHECK(s1 == s2);
    CHECK(agg.a_n == s1);
  }
}
