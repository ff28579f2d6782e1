#pragma once

#include <cstdint>
#include <functional>

#include "convexchains/ensemble.hpp"

namespace convexchains::detail {

// Certified upper bound on sum_{m > M} m^power q^m.
double shell_tail(double q, std::int64_t M, int power);

// Tail bounds past shell M for the moment sums, the covariance sums, the
// log prefactor, and the total activation probability.
double moment_tail(const EnsembleParams& p, double q, std::int64_t M);
double covariance_tail(const EnsembleParams& p, double q, std::int64_t M);
double prefactor_tail(const EnsembleParams& p, double q, std::int64_t M);
double activation_tail(const EnsembleParams& p, double q, std::int64_t M);

// Smallest M with bound(M) < tol.
std::int64_t cutoff(double q, double tol, const std::function<double(std::int64_t)>& bound);

double lambda_of(const EnsembleParams& p);

}  // namespace convexchains::detail
