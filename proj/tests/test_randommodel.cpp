#include <doctest.h>

#include <cmath>

#include "convexchains/errors.hpp"
#include "convexchains/randommodel.hpp"

using namespace convexchains;

TEST_CASE("convex position through the corners") {
  CHECK(is_convex_through_corners({}));
  CHECK(is_convex_through_corners({{0.7, 0.3}}));
  CHECK_FALSE(is_convex_through_corners({{0.3, 0.7}}));  // above the diagonal
  CHECK(is_convex_through_corners({{0.5, 0.1}, {0.9, 0.5}}));
  CHECK(is_convex_through_corners({{0.9, 0.5}, {0.5, 0.1}}));  // order does not matter
  CHECK_FALSE(is_convex_through_corners({{0.5, 0.1}, {0.6, 0.5}}));
  CHECK_FALSE(is_convex_through_corners({{0.5, 0.5}}));  // collinear with the corners
}

TEST_CASE("exact probabilities") {
  CHECK(convex_probability_exact(0) == 1);
  CHECK(convex_probability_exact(1) == mpq_class(1, 2));
  CHECK(convex_probability_exact(2) == mpq_class(1, 12));
  CHECK(convex_probability_exact(3) == mpq_class(1, 144));
  CHECK_THROWS_AS(convex_probability_exact(-1), DomainError);
}

TEST_CASE("Monte Carlo frequency matches 1/(k!(k+1)!)") {
  for (int k = 1; k <= 4; ++k) {
    const ProbabilityEstimate e = convex_probability_mc(k, 400000, 100 + k);
    CAPTURE(k);
    CHECK(e.target == doctest::Approx(convex_probability_exact(k).get_d()));
    CHECK(std::fabs(e.estimate - e.target) < 4 * std::sqrt(e.target * (1 - e.target) / e.trials));
    CHECK(e.standard_error > 0.0);
  }
  const ProbabilityEstimate a = convex_probability_mc(3, 100000, 5), b = convex_probability_mc_serial(3, 100000, 5);
  CHECK(a.hits == b.hits);
  CHECK(a.estimate == b.estimate);
  CHECK_THROWS_AS(convex_probability_mc(0, 100, 1), DomainError);
  CHECK_THROWS_AS(convex_probability_mc(2, 0, 1), DomainError);
}
