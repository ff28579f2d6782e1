#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "convexchains/analytic.hpp"
#include "convexchains/errors.hpp"

using namespace convexchains;

namespace {

// Li_s(x) = x / Gamma(s) int_0^inf t^(s-1) / (e^t - x) dt, x < 1.
double polylog_integral(int s, double x) {
  boost::math::quadrature::exp_sinh<double> q;
  const double v = q.integrate([&](double t) { return std::pow(t, s - 1) / (std::exp(t) - x); });
  return x * v / std::tgamma(s);
}

// Moment equations of the endpoint ensemble as integrals over the positive
// quadrant with density 1/zeta(2): rho = exp(-t), t = delta (x1 + x2).
double endpoint_integral(double lambda) {
  boost::math::quadrature::exp_sinh<double> q;
  return q.integrate([&](double t) {
    const double r = std::exp(-t);
    return 0.5 * t * t * lambda * r / (-std::expm1(-t) * (1 + (lambda - 1) * r));
  }) / kZeta2;
}

double vertex_integral(double lambda) {
  boost::math::quadrature::exp_sinh<double> q;
  return q.integrate([&](double t) {
    const double r = std::exp(-t);
    return t * lambda * r / (1 + (lambda - 1) * r);
  }) / kZeta2;
}

}  // namespace

TEST_CASE("polylogarithms against the Bose integral") {
  for (double x : {-50.0, -3.0, -1.0, -0.3, 0.0, 0.2, 0.5, 0.75, 0.9, 0.99}) {
    CAPTURE(x);
    CHECK(dilog(x) == doctest::Approx(polylog_integral(2, x)).epsilon(1e-12));
    CHECK(trilog(x) == doctest::Approx(polylog_integral(3, x)).epsilon(1e-12));
    CHECK(polylog(2, x) == dilog(x));
  }
  CHECK(dilog(1.0) == doctest::Approx(kZeta2).epsilon(1e-14));
  CHECK(trilog(1.0) == doctest::Approx(boost::math::zeta(3.0)).epsilon(1e-14));
  CHECK(dilog(-1.0) == doctest::Approx(-kZeta2 / 2).epsilon(1e-14));
  CHECK(dilog(0.5) == doctest::Approx(kZeta2 / 2 - 0.5 * std::log(2.0) * std::log(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(polylog(2, 1.5), DomainError);
  CHECK_THROWS_AS(polylog(4, 0.5), DomainError);
}

TEST_CASE("cancellation-free helpers") {
  for (double l : {1e-9, 1e-4, 0.1, 1.0, 5.0}) {
    CHECK(trilog_deficit(l) == doctest::Approx(kZeta3 - polylog_integral(3, 1 - l)).epsilon(1e-9));
  }
  CHECK(trilog_deficit(1e-12) == doctest::Approx(1e-12 * kZeta2).epsilon(1e-6));
  CHECK(dilog_ratio(0.0) == 1.0);
  CHECK(dilog_ratio(1e-9) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(dilog_ratio(-2.0) == doctest::Approx(dilog(-2.0) / -2.0));
}

TEST_CASE("growth constants solve the moment integrals") {
  for (double lambda : {1e-3, 0.1, 0.5, 1.0, 2.0, 10.0, 1e3}) {
    CAPTURE(lambda);
    const GrowthConstants g = growth_constants(lambda);
    // unit endpoint: delta^3 = endpoint integral
    CHECK(std::pow(g.delta, 3) == doctest::Approx(endpoint_integral(lambda)).epsilon(1e-10));
    CHECK(g.c == doctest::Approx(vertex_integral(lambda) / (g.delta * g.delta)).epsilon(1e-10));
    CHECK(g.e == doctest::Approx(3 * g.delta - g.c * std::log(lambda)).epsilon(1e-12));
  }
  const GrowthConstants one = growth_constants(1.0);
  CHECK(one.c == doctest::Approx(1.0 / std::cbrt(kZeta2 * kZeta3 * kZeta3)).epsilon(1e-13));
  CHECK(one.e == doctest::Approx(3 * std::cbrt(kZeta3 / kZeta2)).epsilon(1e-13));
  CHECK_THROWS_AS(growth_constants(0.0), DomainError);
}

TEST_CASE("c(lambda) increases to its supremum and inverts") {
  double prev = 0.0;
  for (double l = -10; l <= 30; l += 2.5) {
    const double c = growth_constants(std::exp(l)).c;
    CHECK(c > prev);
    prev = c;
  }
  CHECK(prev < max_vertices_constant());
  CHECK(max_vertices_constant() == doctest::Approx(3 / std::cbrt(std::numbers::pi * std::numbers::pi)));
  for (double c : {0.1, 0.5, 0.749, 1.2, 1.39}) {
    CHECK(growth_constants(invert_c(c)).c == doctest::Approx(c).epsilon(1e-10));
  }
  CHECK_THROWS_AS(invert_c(1.4), DomainError);
  CHECK_THROWS_AS(invert_c(-1.0), DomainError);
}

TEST_CASE("length-constrained constants rescale by pi^(1/3)/2") {
  const double k = std::cbrt(std::numbers::pi) / 2;
  for (double lambda : {0.01, 1.0, 50.0}) {
    const GrowthConstants g = growth_constants(lambda);
    const JarnikConstants j = jarnik_constants(lambda);
    CHECK(j.c_j == doctest::Approx(g.c * k).epsilon(1e-14));
    CHECK(j.e_j == doctest::Approx(g.e * k).epsilon(1e-14));
  }
  CHECK(jarnik_constants(1.0).e_j ==
        doctest::Approx(std::pow(3.0, 4.0 / 3.0) * std::cbrt(kZeta3) / std::cbrt(4 * std::numbers::pi))
            .epsilon(1e-12));
  CHECK(jarnik_max_constant() == doctest::Approx(max_vertices_constant() * k).epsilon(1e-14));
}

TEST_CASE("few-vertices counts") {
  for (double n : {1e3, 1e6}) {
    for (double s : {0.2, 0.5}) {
      const double c = 1.3;
      CHECK(few_vertices_log_count(n, s, c) ==
            doctest::Approx(few_vertices_log_count_sequence(n, c * std::pow(n, s)) + 2 * c * std::pow(n, s))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("random model expectations") {
  const RandomExpectedChains r = random_expected_chains(2, 2);
  CHECK(r.exact == mpq_class(1, 2));  // C(4,2) / (2! 3!)
  CHECK(r.log_exact == doctest::Approx(std::log(0.5)));
  const RandomExpectedChains big = random_expected_chains(300, 40);
  CHECK(big.log_exact == doctest::Approx(std::log(big.exact.get_d())).epsilon(1e-10));
  // leading order agrees with the exact value at large n
  const double n = 1e4, s = 0.5, c = 1.0;
  const auto k = static_cast<std::int64_t>(c * std::pow(n, s));
  const double exact = random_expected_chains(static_cast<std::int64_t>(n), k).log_exact;
  CHECK(exact / random_expected_chains_log_asymptotic(n, s, c) == doctest::Approx(1.0).epsilon(0.05));

  const double d = random_max_bound();
  CHECK(d > 2.6);
  CHECK(d < 2.7);
  double worst = -1e300;
  for (double c2 = 1e-3; c2 < d; c2 += 1e-3) worst = std::max(worst, random_max_gap(c2, d));
  CHECK(worst <= 1e-6);
  double above = -1e300;
  for (double c2 = 1e-3; c2 < d; c2 += 1e-3) above = std::max(above, random_max_gap(c2, d + 0.02));
  CHECK(above > 0.0);
  CHECK(renyi_sulanke_constant() == doctest::Approx(2 * std::tgamma(5.0 / 3.0) / std::cbrt(3 * std::numbers::pi)));
}

TEST_CASE("e(lambda) decays slowly at large penalties") {
  double prev = 1e300;
  for (double l : {1e2, 1e4, 1e6, 1e8, 1e10, 1e12}) {
    const double e = growth_constants(l).e;
    CHECK(e < prev);
    prev = e;
  }
  CHECK(growth_constants(1e12).e > 0.34);
  CHECK(growth_constants(1e12).e < 0.35);
  CHECK(growth_constants(1e40).e < 0.2);
}
