#include "convexchains/exactcount.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "convexchains/errors.hpp"

namespace convexchains {

namespace {

constexpr std::int64_t kBruteForceLimit = 16;

void check_endpoint(std::int64_t n1, std::int64_t n2) {
  if (n1 < 0 || n2 < 0) throw DomainError("endpoint coordinates must be nonnegative");
}

std::vector<Direction> usable_directions(std::int64_t n1, std::int64_t n2) {
  std::vector<Direction> out;
  if (n1 + n2 == 0) return out;
  for (const Direction& d : enumerate_directions(n1 + n2)) {
    if (d.x1 <= n1 && d.x2 <= n2) out.push_back(d);
  }
  return out;
}

const mpz_class kZero = 0;

}  // namespace

const mpz_class& CountTable::at(std::int64_t vertices) const {
  if (vertices < 0 || vertices >= static_cast<std::int64_t>(counts.size())) return kZero;
  return counts[static_cast<std::size_t>(vertices)];
}

mpz_class CountTable::total() const {
  mpz_class t = 0;
  for (const auto& c : counts) t += c;
  return t;
}

std::int64_t CountTable::max_vertices() const {
  for (std::int64_t n = static_cast<std::int64_t>(counts.size()) - 1; n >= 0; --n) {
    if (counts[static_cast<std::size_t>(n)] != 0) return n;
  }
  return 0;
}

std::int64_t vertex_count_upper_bound(std::int64_t n1, std::int64_t n2) {
  check_endpoint(n1, n2);
  std::int64_t budget = n1 + n2;
  std::int64_t count = 0;
  for (std::int64_t m = 1; m <= budget; ++m) {
    std::int64_t shell = 0;
    for_each_in_shell(m, [&](Direction) { ++shell; });
    const std::int64_t take = std::min(shell, budget / m);
    count += take;
    budget -= take * m;
    if (take < shell) break;
  }
  return count;
}

CountTable count_exact(std::int64_t n1, std::int64_t n2, const CountOptions& options) {
  check_endpoint(n1, n2);
  if (n1 + n2 > options.budget) {
    throw ResourceError("count_exact: n1 + n2 = " + std::to_string(n1 + n2) +
                        " exceeds the budget " + std::to_string(options.budget));
  }
  const std::int64_t nmax = vertex_count_upper_bound(n1, n2);
  const std::size_t width = static_cast<std::size_t>(nmax + 1);
  const std::size_t rows = static_cast<std::size_t>(n2 + 1);
  auto idx = [&](std::int64_t a, std::int64_t b, std::int64_t n) {
    return (static_cast<std::size_t>(a) * rows + static_cast<std::size_t>(b)) * width +
           static_cast<std::size_t>(n);
  };

  // table[a][b][N] = number of multiplicity functions over the directions
  // processed so far with endpoint (a, b) and N active directions.
  std::vector<mpz_class> table(static_cast<std::size_t>(n1 + 1) * rows * width);
  table[idx(0, 0, 0)] = 1;

  mpz_class acc;
  for (const Direction& d : usable_directions(n1, n2)) {
    // Descending (a, b) keeps every source cell (a - k d1, b - k d2) at its
    // value from before this direction.
    for (std::int64_t a = n1; a >= 0; --a) {
      for (std::int64_t b = n2; b >= 0; --b) {
        if (a < d.x1 || b < d.x2) continue;
        for (std::int64_t n = nmax; n >= 1; --n) {
          acc = 0;
          for (std::int64_t pa = a - d.x1, pb = b - d.x2; pa >= 0 && pb >= 0;
               pa -= d.x1, pb -= d.x2) {
            acc += table[idx(pa, pb, n - 1)];
          }
          if (acc != 0) table[idx(a, b, n)] += acc;
        }
      }
    }
  }

  CountTable out{n1, n2, std::vector<mpz_class>(width)};
  for (std::int64_t n = 0; n <= nmax; ++n) out.counts[static_cast<std::size_t>(n)] = table[idx(n1, n2, n)];
  return out;
}

void for_each_chain(std::int64_t n1, std::int64_t n2,
                    const std::function<void(const VertexMap&)>& visit) {
  check_endpoint(n1, n2);
  if (n1 + n2 > kBruteForceLimit) {
    throw ResourceError("brute-force enumeration limited to n1 + n2 <= " +
                        std::to_string(kBruteForceLimit));
  }
  // Any subset of directions, each with any positive multiplicity, as long
  // as the coordinates add up exactly.
  std::vector<Direction> dirs;
  for (std::int64_t a = 0; a <= n1; ++a) {
    for (std::int64_t b = 0; b <= n2; ++b) {
      if (is_direction(a, b)) dirs.push_back(Direction{a, b});
    }
  }
  VertexMap current;
  std::function<void(std::size_t, std::int64_t, std::int64_t)> walk =
      [&](std::size_t i, std::int64_t ra, std::int64_t rb) {
        if (ra == 0 && rb == 0) {
          visit(current);
          return;
        }
        if (i == dirs.size()) return;
        walk(i + 1, ra, rb);
        const Direction d = dirs[i];
        for (std::int64_t k = 1; k * d.x1 <= ra && k * d.x2 <= rb; ++k) {
          current.set(d, k);
          walk(i + 1, ra - k * d.x1, rb - k * d.x2);
        }
        current.set(d, 0);
      };
  walk(0, n1, n2);
}

CountTable count_bruteforce(std::int64_t n1, std::int64_t n2) {
  std::vector<std::uint64_t> tally;
  for_each_chain(n1, n2, [&](const VertexMap& nu) {
    const std::size_t n = nu.support_size();
    if (tally.size() <= n) tally.resize(n + 1, 0);
    ++tally[n];
  });
  const std::int64_t nmax = vertex_count_upper_bound(n1, n2);
  CountTable out{n1, n2, std::vector<mpz_class>(static_cast<std::size_t>(nmax + 1))};
  for (std::size_t n = 0; n < tally.size(); ++n) {
    if (n >= out.counts.size()) throw std::logic_error("count_bruteforce: vertex bound violated");
    out.counts[n] = mpz_class(std::to_string(tally[n]));
  }
  return out;
}

std::int64_t max_vertices_exact(std::int64_t n, const CountOptions& options) {
  return count_exact(n, n, options).max_vertices();
}

double log_mpz(const mpz_class& v) {
  if (v <= 0) return -std::numeric_limits<double>::infinity();
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, v.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

double log_count_normalized(std::int64_t n, std::int64_t vertices, const CountOptions& options) {
  if (n < 1) throw DomainError("log_count_normalized: n must be >= 1");
  const CountTable t = count_exact(n, n, options);
  return log_mpz(t.at(vertices)) / std::cbrt(static_cast<double>(n) * static_cast<double>(n));
}

}  // namespace convexchains
