#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <gmpxx.h>

#include "convexchains/chain.hpp"

namespace convexchains {

// Exact numbers of convex chains ending at (n1, n2), indexed by vertex count.
struct CountTable {
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;
  std::vector<mpz_class> counts;  // counts[N]; size is vertex bound + 1

  const mpz_class& at(std::int64_t vertices) const;
  mpz_class total() const;
  // Largest N with a nonzero count (0 for the empty chain).
  std::int64_t max_vertices() const;

  bool operator==(const CountTable&) const = default;
};

struct CountOptions {
  std::int64_t budget = 60;  // maximum n1 + n2
};

// Upper bound on the vertex count of a chain ending at (n1, n2): the most
// distinct directions whose coordinate sums fit in n1 + n2.
std::int64_t vertex_count_upper_bound(std::int64_t n1, std::int64_t n2);

// Dynamic programme over directions with an in-place (a, b, N) table.
CountTable count_exact(std::int64_t n1, std::int64_t n2, const CountOptions& options = {});

// Independent depth-first oracle; n1 + n2 <= 16.
CountTable count_bruteforce(std::int64_t n1, std::int64_t n2);

// Calls visit for every multiplicity function with endpoint (n1, n2);
// n1 + n2 <= 16.
void for_each_chain(std::int64_t n1, std::int64_t n2,
                    const std::function<void(const VertexMap&)>& visit);

// Largest vertex count of a chain from (0,0) to (n,n).
std::int64_t max_vertices_exact(std::int64_t n, const CountOptions& options = {});

// ln N(n,n,N) / n^(2/3); -infinity when the count is zero.
double log_count_normalized(std::int64_t n, std::int64_t vertices,
                            const CountOptions& options = {});

// Natural logarithm of a positive big integer.
double log_mpz(const mpz_class& v);

}  // namespace convexchains
