#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <vector>

namespace convexchains {

// Primitive lattice direction: nonnegative, coprime, not both zero.
// Ordered lexicographically so it can key ordered maps deterministically.
struct Direction {
  std::int64_t x1 = 1;
  std::int64_t x2 = 0;

  auto operator<=>(const Direction&) const = default;
};

// Validating constructor; throws DomainError unless gcd(x1, x2) = 1 with
// x1, x2 >= 0.
Direction make_direction(std::int64_t x1, std::int64_t x2);

bool is_direction(std::int64_t x1, std::int64_t x2) noexcept;

// Strict slope order x2/x1 by exact cross products; (1,0) is smallest and
// (0,1) largest.
constexpr bool slope_less(const Direction& a, const Direction& b) noexcept {
  return a.x2 * b.x1 < b.x2 * a.x1;
}

// All directions with x1 + x2 <= max_coord_sum, in strictly increasing slope.
std::vector<Direction> enumerate_directions(std::int64_t max_coord_sum);

// card{x in X : x1 <= n, x2 <= n} / (n+1)^2.
double direction_density(std::int64_t n);

struct XnAggregate {
  std::int64_t a_n = 0;          // common coordinate of the sum of X_n
  std::int64_t cardinality = 0;  // card(X_n)
};

// Aggregates over X_n = {x in X : x1 + x2 <= n}.
XnAggregate xn_aggregate(std::int64_t n);

// Visits the directions of the shell x1 + x2 = m in increasing x1 (i.e.
// decreasing slope).
template <class F>
void for_each_in_shell(std::int64_t m, F&& f) {
  for (std::int64_t x1 = 0; x1 <= m; ++x1) {
    if (std::gcd(x1, m) == 1) f(Direction{x1, m - x1});
  }
}

}  // namespace convexchains
