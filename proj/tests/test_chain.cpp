#include <doctest.h>

#include <cmath>

#include "convexchains/chain.hpp"
#include "convexchains/errors.hpp"
#include "convexchains/rng.hpp"

using namespace convexchains;

namespace {

VertexMap random_map(Rng& rng, int max_sum) {
  VertexMap nu;
  for (int m = 1; m <= max_sum; ++m) {
    for_each_in_shell(m, [&](Direction d) {
      if (rng.uniform() < 0.3) nu.set(d, 1 + static_cast<std::int64_t>(rng.uniform() * 3));
    });
  }
  return nu;
}

}  // namespace

TEST_CASE("vertex map stores only nonzero multiplicities") {
  VertexMap nu;
  nu.set({1, 1}, 2);
  nu.add({1, 1}, 1);
  nu.set({1, 0}, 1);
  CHECK(nu[{1, 1}] == 3);
  CHECK(nu.support_size() == 2);
  nu.set({1, 0}, 0);
  CHECK(nu.support_size() == 1);
  CHECK(nu[{1, 0}] == 0);
  CHECK_THROWS_AS(nu.set({2, 1}, -1), DomainError);
}

TEST_CASE("chain constructor rejects non-convex and non-monotone input") {
  CHECK_NOTHROW(ConvexChain({{0, 0}, {2, 0}, {3, 1}, {3, 3}}));
  CHECK_THROWS_AS(ConvexChain({{0, 0}, {1, 1}, {3, 1}}), DomainError);  // slope decreases
  CHECK_THROWS_AS(ConvexChain({{0, 0}, {1, 1}, {2, 2}}), DomainError);  // repeated direction
  CHECK_THROWS_AS(ConvexChain({{0, 0}, {1, -1}}), DomainError);
  CHECK_THROWS_AS(ConvexChain({{1, 0}, {2, 0}}), DomainError);          // not from origin
  CHECK(ConvexChain().endpoint() == LatticePoint{0, 0});
}

TEST_CASE("decode joins equal directions into one side") {
  VertexMap nu{{{1, 0}, 2}, {{1, 1}, 1}, {{0, 1}, 3}};
  const ConvexChain c = decode(nu);
  const std::vector<LatticePoint> expected{{0, 0}, {2, 0}, {3, 1}, {3, 4}};
  CHECK(c.vertices() == expected);
  const ChainStats s = stats(nu);
  CHECK(s.endpoint == LatticePoint{3, 4});
  CHECK(s.vertex_count == 3);
  CHECK(s.euclidean_length == doctest::Approx(2 + std::sqrt(2.0) + 3));
}

TEST_CASE("encode inverts decode on random multiplicity functions") {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const VertexMap nu = random_map(rng, 8);
    const ConvexChain c = decode(nu);
    CHECK(encode(c) == nu);
    CHECK(static_cast<std::int64_t>(c.side_count()) == stats(nu).vertex_count);
    CHECK(c.endpoint() == stats(nu).endpoint);
  }
}

TEST_CASE("CSV and JSON round trips") {
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const VertexMap nu = random_map(rng, 6);
    const ConvexChain c = decode(nu);
    CHECK(chain_from_csv(to_csv(c)) == c);
    CHECK(vertex_map_from_json(to_json(nu)) == nu);
  }
  CHECK_THROWS(chain_from_csv("0,0\n1,x\n"));
}
