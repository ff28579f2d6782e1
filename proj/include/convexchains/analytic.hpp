#pragma once

#include <cstdint>
#include <numbers>

#include <gmpxx.h>

namespace convexchains {

inline constexpr double kZeta2 = 1.6449340668482264365;  // pi^2 / 6
inline constexpr double kZeta3 = 1.2020569031595942854;

// Real polylogarithms of order 2 and 3 on (-inf, 1]; absolute error
// below 1e-13. Throws DomainError for x > 1 or other orders.
double polylog(int order, double x);
double dilog(double x);
double trilog(double x);

// zeta(3) - Li3(1 - lambda), without the cancellation near lambda = 0.
double trilog_deficit(double lambda);
// Li2(u) / u with the removable singularity at u = 0 filled in.
double dilog_ratio(double u);

// Exponential growth constants of chains ending at (n, n) with penalty
// lambda on each vertex: N ~ c n^(2/3) vertices and ln(count) ~ e n^(2/3).
struct GrowthConstants {
  double lambda = 1.0;
  double delta = 0.0;  // scale of 1 - z in units of n^(-1/3)
  double c = 0.0;
  double e = 0.0;
};

GrowthConstants growth_constants(double lambda);

// sup over lambda of c(lambda): 3 / pi^(2/3).
double max_vertices_constant();

// The lambda with c(lambda) = c_target, by bisection on ln(lambda).
double invert_c(double c_target);

// Same constants for chains constrained by total Euclidean length.
struct JarnikConstants {
  double c_j = 0.0;
  double e_j = 0.0;
};

JarnikConstants jarnik_constants(double lambda);
// lambda -> infinity limit of c_J: 3 / (2 pi^(1/3)).
double jarnik_max_constant();

// Leading-order ln N(n, n, [c n^s]) for 0 < s < 2/3.
double few_vertices_log_count(double n, double s, double c);
// The same quantity written for a vertex sequence u: u ln(n^2 / u^3).
double few_vertices_log_count_sequence(double n, double u);

// Expected number of convex chains through k of n^2 uniform random points.
struct RandomExpectedChains {
  mpq_class exact;         // C(n^2, k) / (k! (k+1)!)
  double log_exact = 0.0;  // its natural logarithm
};

RandomExpectedChains random_expected_chains(std::int64_t n, std::int64_t k);
// ln of n^(c(2-3s) n^s) exp((3c - 3c ln c) n^s).
double random_expected_chains_log_asymptotic(double n, double s, double c);

// (d-c) ln(d/(d-c)) + c ln(d/c) - 3c(1 - ln c); the bound on d requires this
// to be <= 0 on (0, d).
double random_max_gap(double c, double d);
// Largest feasible d (about 2.668).
double random_max_bound();

// 2 Gamma(5/3) / (3 pi)^(1/3).
double renyi_sulanke_constant();

}  // namespace convexchains
