#include <cmath>
#include <limits>
#include <string>

#include "convexchains/analytic.hpp"
#include "convexchains/errors.hpp"

namespace convexchains {

namespace {

// sum_{k>=1} x^k / k^p for |x| <= 1/2.
double power_series(double x, int p) {
  double term = x, sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    const double kk = static_cast<double>(k);
    const double add = term / (p == 2 ? kk * kk : kk * kk * kk);
    sum += add;
    if (std::fabs(add) <= 1e-18 * std::fabs(sum)) break;
    term *= x;
  }
  return sum;
}

// zeta(-j) for j = 1, 3, 5, ...: the nonzero values -B_{j+1} / (j+1).
constexpr double kZetaNegOdd[] = {
    -1.0 / 12.0,          // zeta(-1)
    1.0 / 120.0,          // zeta(-3)
    -1.0 / 252.0,         // zeta(-5)
    1.0 / 240.0,          // zeta(-7)
    -1.0 / 132.0,         // zeta(-9)
    691.0 / 32760.0,      // zeta(-11)
    -1.0 / 12.0,          // zeta(-13)
    3617.0 / 8160.0,      // zeta(-15)
    -43867.0 / 14364.0,   // zeta(-17)
};

// Li3(e^mu) - zeta(3) for -0.7 <= mu < 0, from the expansion about mu = 0.
double trilog_log_expansion_shift(double mu) {
  double sum = kZeta2 * mu + 0.5 * mu * mu * (1.5 - std::log(-mu));
  // k = 3 term: zeta(0) mu^3 / 3!
  double power = mu * mu * mu;
  double fact = 6.0;
  sum += -0.5 * power / fact;
  // even k >= 4 pair with zeta(3 - k) = zeta(-(k - 3)), k - 3 odd
  for (int i = 0, k = 4; i < 9; ++i, k += 2) {
    power *= mu;
    fact *= static_cast<double>(k);
    const double add = kZetaNegOdd[i] * power / fact;
    sum += add;
    power *= mu;
    fact *= static_cast<double>(k + 1);
    if (std::fabs(add) < 1e-19) break;
  }
  return sum;
}

}  // namespace

double dilog(double x) {
  if (std::isnan(x) || x > 1.0) throw DomainError("dilog: argument must be <= 1");
  if (x == 1.0) return kZeta2;
  if (x > 0.5) return kZeta2 - std::log(x) * std::log1p(-x) - dilog(1.0 - x);
  if (x >= -0.5) return power_series(x, 2);
  if (x >= -1.0) {
    // Landen: x / (x - 1) lies in (1/3, 1/2].
    const double l = std::log1p(-x);
    return -power_series(x / (x - 1.0), 2) - 0.5 * l * l;
  }
  const double l = std::log(-x);
  return -kZeta2 - 0.5 * l * l - dilog(1.0 / x);
}

double trilog(double x) {
  if (std::isnan(x) || x > 1.0) throw DomainError("trilog: argument must be <= 1");
  if (x == 1.0) return kZeta3;
  if (x > 0.5) return kZeta3 + trilog_log_expansion_shift(std::log(x));
  if (x >= -0.5) return power_series(x, 3);
  if (x >= -1.0) return 0.25 * trilog(x * x) - trilog(-x);
  const double l = std::log(-x);
  return trilog(1.0 / x) - kZeta2 * l - l * l * l / 6.0;
}

double polylog(int order, double x) {
  switch (order) {
    case 2:
      return dilog(x);
    case 3:
      return trilog(x);
    default:
      throw DomainError("polylog: only orders 2 and 3 are supported, got " + std::to_string(order));
  }
}

double trilog_deficit(double lambda) {
  if (!(lambda > 0.0)) throw DomainError("trilog_deficit: lambda must be positive");
  if (lambda < 0.5) return -trilog_log_expansion_shift(std::log1p(-lambda));
  return kZeta3 - trilog(1.0 - lambda);
}

double dilog_ratio(double u) {
  if (std::fabs(u) < 1e-6) return 1.0 + u / 4.0 + u * u / 9.0;
  return dilog(u) / u;
}

}  // namespace convexchains
