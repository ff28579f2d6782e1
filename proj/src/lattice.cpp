#include "convexchains/lattice.hpp"

#include <algorithm>
#include <string>

#include "convexchains/errors.hpp"

namespace convexchains {

bool is_direction(std::int64_t x1, std::int64_t x2) noexcept {
  return x1 >= 0 && x2 >= 0 && std::gcd(x1, x2) == 1;
}

Direction make_direction(std::int64_t x1, std::int64_t x2) {
  if (!is_direction(x1, x2)) {
    throw DomainError("(" + std::to_string(x1) + "," + std::to_string(x2) +
                      ") is not a primitive nonnegative lattice direction");
  }
  return Direction{x1, x2};
}

std::vector<Direction> enumerate_directions(std::int64_t max_coord_sum) {
  if (max_coord_sum < 1) throw DomainError("enumerate_directions: max_coord_sum must be >= 1");
  std::vector<Direction> out;
  for (std::int64_t m = 1; m <= max_coord_sum; ++m) {
    for_each_in_shell(m, [&](Direction d) { out.push_back(d); });
  }
  std::sort(out.begin(), out.end(), slope_less);
  return out;
}

double direction_density(std::int64_t n) {
  if (n < 1) throw DomainError("direction_density: n must be >= 1");
  std::int64_t count = 0;
#pragma omp parallel for reduction(+ : count) schedule(static)
  for (std::int64_t a = 0; a <= n; ++a) {
    for (std::int64_t b = 0; b <= n; ++b) {
      if (std::gcd(a, b) == 1) ++count;
    }
  }
  const double side = static_cast<double>(n + 1);
  return static_cast<double>(count) / (side * side);
}

XnAggregate xn_aggregate(std::int64_t n) {
  if (n < 1) throw DomainError("xn_aggregate: n must be >= 1");
  XnAggregate agg;
  for (std::int64_t m = 1; m <= n; ++m) {
    for_each_in_shell(m, [&](Direction d) {
      agg.a_n += d.x1;
      ++agg.cardinality;
    });
  }
  return agg;
}

}  // namespace convexchains
