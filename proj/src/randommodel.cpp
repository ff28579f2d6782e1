#include "convexchains/randommodel.hpp"

#include <algorithm>
#include <cmath>

#include "convexchains/errors.hpp"
#include "convexchains/rng.hpp"

namespace convexchains {

bool is_convex_through_corners(std::vector<Point2> points) {
  std::sort(points.begin(), points.end(), [](const Point2& a, const Point2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  Point2 prev{0.0, 0.0};
  double px = 0.0, py = 0.0;  // previous side; (0,0) before the first one
  auto step = [&](Point2 next) {
    const double dx = next.x - prev.x, dy = next.y - prev.y;
    if (!(dx > 0.0 && dy > 0.0)) return false;
    if ((px != 0.0 || py != 0.0) && !(px * dy - py * dx > 0.0)) return false;
    px = dx;
    py = dy;
    prev = next;
    return true;
  };
  for (const Point2& p : points) {
    if (!step(p)) return false;
  }
  return step({1.0, 1.0});
}

namespace {

constexpr std::int64_t kBlock = 4096;

ProbabilityEstimate mc_impl(int k, std::int64_t trials, std::uint64_t seed, bool parallel) {
  if (k < 1) throw DomainError("random model needs k >= 1");
  if (trials < 1) throw DomainError("random model needs at least one trial");
  const std::int64_t blocks = (trials + kBlock - 1) / kBlock;
  std::vector<std::int64_t> hits(static_cast<std::size_t>(blocks), 0);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t b = 0; b < blocks; ++b) {
    Rng rng(seed, static_cast<std::uint64_t>(b));
    std::vector<Point2> pts(static_cast<std::size_t>(k));
    const std::int64_t end = std::min(trials, (b + 1) * kBlock);
    std::int64_t h = 0;
    for (std::int64_t t = b * kBlock; t < end; ++t) {
      for (auto& p : pts) {
        p.x = rng.uniform();
        p.y = rng.uniform();
      }
      h += is_convex_through_corners(pts) ? 1 : 0;
    }
    hits[static_cast<std::size_t>(b)] = h;
  }
  ProbabilityEstimate e;
  e.trials = trials;
  for (std::int64_t h : hits) e.hits += h;
  const double n = static_cast<double>(trials);
  e.estimate = static_cast<double>(e.hits) / n;
  e.standard_error = std::sqrt(e.estimate * (1.0 - e.estimate) / n);
  e.target = convex_probability_exact(k).get_d();
  return e;
}

}  // namespace

ProbabilityEstimate convex_probability_mc(int k, std::int64_t trials, std::uint64_t seed) {
  return mc_impl(k, trials, seed, true);
}

ProbabilityEstimate convex_probability_mc_serial(int k, std::int64_t trials, std::uint64_t seed) {
  return mc_impl(k, trials, seed, false);
}

mpq_class convex_probability_exact(int k) {
  if (k < 0) throw DomainError("k must be nonnegative");
  mpz_class a, b;
  mpz_fac_ui(a.get_mpz_t(), static_cast<unsigned long>(k));
  mpz_fac_ui(b.get_mpz_t(), static_cast<unsigned long>(k + 1));
  return mpq_class(mpz_class(1), a * b);
}

}  // namespace convexchains
