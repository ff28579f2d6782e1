#include "convexchains/analytic.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "convexchains/errors.hpp"
#include "convexchains/exactcount.hpp"

namespace convexchains {

namespace {

void require_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("lambda must be a positive finite number");
  }
}

}  // namespace

GrowthConstants growth_constants(double lambda) {
  require_lambda(lambda);
  const double deficit = trilog_deficit(lambda);
  const double ratio = dilog_ratio(1.0 - lambda);
  GrowthConstants g;
  g.lambda = lambda;
  g.delta = std::cbrt(deficit / kZeta2);
  g.c = lambda * ratio / (std::cbrt(kZeta2) * std::cbrt(deficit * deficit));
  g.e = 3.0 * g.delta - g.c * std::log(lambda);
  return g;
}

double max_vertices_constant() { return 3.0 / std::cbrt(std::numbers::pi * std::numbers::pi); }

double invert_c(double c_target) {
  const double sup = max_vertices_constant();
  if (!(c_target > 0.0) || !(c_target < sup)) {
    std::ostringstream os;
    os.precision(10);
    os << "invert_c: target " << c_target << " must lie in (0, 3/pi^(2/3) = " << sup << ")";
    throw DomainError(os.str());
  }
  auto c_at = [](double log_lambda) { return growth_constants(std::exp(log_lambda)).c; };
  double lo = -60.0, hi = 40.0;
  while (c_at(lo) > c_target) {
    lo *= 2.0;
    if (lo < -700.0) throw DomainError("invert_c: target too small to bracket");
  }
  while (c_at(hi) < c_target) {
    hi = std::min(2.0 * hi, 700.0);
    if (hi == 700.0 && c_at(hi) < c_target) {
      throw DomainError("invert_c: target too close to 3/pi^(2/3) to resolve in double precision");
    }
  }
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 400; ++it) {
    mid = 0.5 * (lo + hi);
    const double c = c_at(mid);
    if (std::fabs(c - c_target) <= 1e-12) break;
    (c < c_target ? lo : hi) = mid;
    if (hi - lo <= 1e-15 * std::max(1.0, std::fabs(mid))) break;
  }
  return std::exp(mid);
}

JarnikConstants jarnik_constants(double lambda) {
  const GrowthConstants g = growth_constants(lambda);
  const double scale = std::cbrt(std::numbers::pi) / 2.0;
  return JarnikConstants{scale * g.c, scale * g.e};
}

double jarnik_max_constant() { return 3.0 / (2.0 * std::cbrt(std::numbers::pi)); }

double few_vertices_log_count(double n, double s, double c) {
  if (!(s > 0.0 && s < 2.0 / 3.0)) throw DomainError("few_vertices_log_count: s must lie in (0, 2/3)");
  if (!(c > 0.0)) throw DomainError("few_vertices_log_count: c must be positive");
  if (!(n > 0.0)) throw DomainError("few_vertices_log_count: n must be positive");
  return ((2.0 - 3.0 * s) * c * std::log(n) + 2.0 * c - 3.0 * c * std::log(c)) * std::pow(n, s);
}

double few_vertices_log_count_sequence(double n, double u) {
  if (!(n > 0.0) || !(u > 0.0)) throw DomainError("few_vertices_log_count_sequence: n, u must be positive");
  return u * std::log(n * n / (u * u * u));
}

RandomExpectedChains random_expected_chains(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n * n) throw DomainError("random_expected_chains: need 0 <= k <= n^2");
  mpz_class binom, kf, k1f;
  mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(n * n), static_cast<unsigned long>(k));
  mpz_fac_ui(kf.get_mpz_t(), static_cast<unsigned long>(k));
  mpz_fac_ui(k1f.get_mpz_t(), static_cast<unsigned long>(k + 1));
  RandomExpectedChains r;
  r.exact = mpq_class(binom, kf * k1f);
  r.exact.canonicalize();
  r.log_exact = log_mpz(binom) - log_mpz(kf) - log_mpz(k1f);
  return r;
}

double random_expected_chains_log_asymptotic(double n, double s, double c) {
  if (!(n > 0.0) || !(c > 0.0) || s < 0.0 || s > 1.0) {
    throw DomainError("random_expected_chains_log_asymptotic: need n, c > 0 and s in [0, 1]");
  }
  const double ns = std::pow(n, s);
  return c * (2.0 - 3.0 * s) * ns * std::log(n) + (3.0 * c - 3.0 * c * std::log(c)) * ns;
}

double random_max_gap(double c, double d) {
  return (d - c) * std::log(d / (d - c)) + c * std::log(d / c) - 3.0 * c * (1.0 - std::log(c));
}

namespace {

double max_gap_over_c(double d) {
  constexpr int kGrid = 10000;
  int best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  auto c_of = [&](int i) { return d * (static_cast<double>(i) + 0.5) / kGrid; };
  for (int i = 0; i < kGrid; ++i) {
    const double v = random_max_gap(c_of(i), d);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  // golden-section refinement between the grid neighbours
  double a = best > 0 ? c_of(best - 1) : 0.5 * c_of(0);
  double b = best < kGrid - 1 ? c_of(best + 1) : 0.5 * (c_of(kGrid - 1) + d);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = random_max_gap(x1, d), f2 = random_max_gap(x2, d);
  for (int it = 0; it < 100 && b - a > 1e-14; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = random_max_gap(x2, d);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = random_max_gap(x1, d);
    }
  }
  return std::max({best_val, f1, f2});
}

}  // namespace

double random_max_bound() {
  double lo = 2.0, hi = 2.9;  // feasible, infeasible
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (max_gap_over_c(mid) <= 0.0 ? lo : hi) = mid;
  }
  return lo;
}

double renyi_sulanke_constant() {
  return 2.0 * std::tgamma(5.0 / 3.0) / std::cbrt(3.0 * std::numbers::pi);
}

}  // namespace convexchains
