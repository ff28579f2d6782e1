#include <doctest.h>

#include <cmath>
#include <numbers>

#include "convexchains/analytic.hpp"
#include "convexchains/ensemble.hpp"
#include "convexchains/errors.hpp"

using namespace convexchains;

TEST_CASE("endpoint calibration follows the asymptotic formula") {
  const std::int64_t n = 1000;
  const Calibration c = calibrate(n, EndpointPenalty{2.0});
  const GrowthConstants g = growth_constants(2.0);
  CHECK(c.params.kind == EnsembleKind::endpoint);
  CHECK(c.params.z1 == doctest::Approx(1 - g.delta / 10.0));
  CHECK(c.params.z2 == c.params.z1);
  CHECK(c.params.lambda == 2.0);
  CHECK(c.target_endpoint == 1000.0);
  CHECK(c.iterations == 0);
  // moments are within a few percent before refinement
  const MomentReport m = moments(c.params);
  CHECK(m.expected_endpoint[0] / n == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("refinement solves the finite-n moment equations") {
  const std::int64_t n = 2000;
  SUBCASE("endpoint, penalty fixed") {
    const Calibration c = calibrate(n, EndpointPenalty{0.5}, RefineOptions{true});
    const MomentReport m = moments(c.params);
    CHECK(m.expected_endpoint[0] == doctest::Approx(n).epsilon(1e-9));
    CHECK(c.params.lambda == 0.5);
    CHECK(c.iterations > 0);
  }
  SUBCASE("endpoint with a vertex constant") {
    const double cv = 1.1;
    const Calibration c = calibrate(n, EndpointVertexConstant{cv}, RefineOptions{true});
    const MomentReport m = moments(c.params);
    CHECK(m.expected_endpoint[0] == doctest::Approx(n).epsilon(1e-9));
    CHECK(m.expected_vertices == doctest::Approx(cv * std::pow(n, 2.0 / 3.0)).epsilon(1e-9));
  }
  SUBCASE("few vertices") {
    const Calibration c = calibrate(n, FewVertices{0.4, 1.5}, RefineOptions{true});
    const MomentReport m = moments(c.params);
    CHECK(m.expected_endpoint[0] == doctest::Approx(n).epsilon(1e-9));
    CHECK(m.expected_vertices == doctest::Approx(1.5 * std::pow(n, 0.4)).epsilon(1e-9));
    CHECK(c.params.lambda < 1.0);
  }
  SUBCASE("length") {
    const Calibration c = calibrate(n, LengthVertexConstant{0.7}, RefineOptions{true});
    const MomentReport m = moments(c.params);
    CHECK(c.params.kind == EnsembleKind::length);
    CHECK(m.expected_length == doctest::Approx(n).epsilon(1e-9));
    CHECK(m.expected_vertices == doctest::Approx(0.7 * std::pow(n, 2.0 / 3.0)).epsilon(1e-9));
  }
  SUBCASE("mixed") {
    const double L = 1.75;
    const Calibration c = calibrate(n, MixedLength{L}, RefineOptions{true});
    const MomentReport m = moments(c.params);
    CHECK(c.params.kind == EnsembleKind::mixed);
    CHECK(m.expected_endpoint[0] == doctest::Approx(n).epsilon(1e-9));
    CHECK(m.expected_length == doctest::Approx(L * n).epsilon(1e-9));
    REQUIRE(c.family.has_value());
    CHECK(c.family->branch == FamilyBranch::alpha);
  }
  SUBCASE("asymmetric endpoint") {
    MomentTargets t;
    t.x1 = 300;
    t.x2 = 500;
    t.vertices = 40;
    int it = 0;
    const EnsembleParams p = refine(EnsembleParams::endpoint(0.9, 0.9, 1.0), t, RefineOptions{true}, &it);
    const MomentReport m = moments(p);
    CHECK(m.expected_endpoint[0] == doctest::Approx(300).epsilon(1e-9));
    CHECK(m.expected_endpoint[1] == doctest::Approx(500).epsilon(1e-9));
    CHECK(m.expected_vertices == doctest::Approx(40).epsilon(1e-9));
    CHECK(it > 0);
  }
}

TEST_CASE("mixed calibration recovers the curve family") {
  for (double L : {1.5, 1.6, 1.7, 1.9}) {
    const Calibration c = calibrate(100000, MixedLength{L});
    const FamilyParameter want = solve_family_parameter(L);
    const FamilyParameter got = mixed_family_parameter(c.params);
    CHECK(got.branch == want.branch);
    CHECK(got.value == doctest::Approx(want.value).epsilon(1e-12));
    // the asymptotic length ratio is close to L already at this n
    const MomentReport m = moments(c.params);
    CHECK(m.expected_length / m.expected_endpoint[0] == doctest::Approx(L).epsilon(0.02));
  }
  CHECK(mixed_family_parameter(EnsembleParams::mixed(1.0, 0.9)).branch == FamilyBranch::circle);
}

TEST_CASE("calibration domain errors") {
  CHECK_THROWS_AS(calibrate(0, EndpointPenalty{1.0}), DomainError);
  CHECK_THROWS_AS(calibrate(100, EndpointVertexConstant{1.5}), DomainError);
  CHECK_THROWS_AS(calibrate(100, FewVertices{0.7, 1.0}), DomainError);
  CHECK_THROWS_AS(calibrate(100, LengthVertexConstant{1.1}), DomainError);
  CHECK_THROWS_AS(calibrate(100, MixedLength{2.1}), DomainError);
}

TEST_CASE("unreachable targets raise a convergence error with residuals") {
  MomentTargets t;
  t.x1 = 10;
  t.x2 = 10;
  t.vertices = 60;  // more vertices than any chain to (10, 10) can have in expectation
  try {
    refine(EnsembleParams::endpoint(0.7, 0.7, 1.0), t, RefineOptions{true, 1e-10, 30});
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK_FALSE(e.residuals().empty());
  }
}

TEST_CASE("few-vertices penalty scales as n^(3s-2)") {
  const Calibration c = calibrate(10000, FewVertices{0.5, 1.0});
  CHECK(c.params.lambda == doctest::Approx(1e-2));
  CHECK(c.params.z1 == doctest::Approx(1 - 1.0 / 100));
}
