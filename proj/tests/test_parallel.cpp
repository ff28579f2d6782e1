#include <doctest.h>

#include <omp.h>

#include <cstdlib>

#include "convexchains/ensemble.hpp"
#include "convexchains/parallel.hpp"
#include "convexchains/randommodel.hpp"

using namespace convexchains;

TEST_CASE("thread count from the environment") {
  setenv("CONVEXCHAINS_THREADS", "3", 1);
  CHECK(default_thread_count() == 3);
  configure_threads();
  CHECK(omp_get_max_threads() == 3);
  setenv("CONVEXCHAINS_THREADS", "zero", 1);
  CHECK(default_thread_count() >= 1);
  unsetenv("CONVEXCHAINS_THREADS");
}

TEST_CASE("results do not depend on the thread count") {
  const EnsembleParams p = EnsembleParams::endpoint(0.7, 0.65, 1.4);
  Constraint c;
  c.endpoint = LatticePoint{15, 12};

  omp_set_num_threads(1);
  const MomentReport m1 = moments(p);
  const CountEstimate e1 = estimate_count(15, 12, 6, p, 20000, 9);
  const auto s1 = sample_conditioned_many(p, c, {}, 12, 4);
  const ProbabilityEstimate r1 = convex_probability_mc(2, 50000, 3);

  for (int threads : {2, 4, 7}) {
    omp_set_num_threads(threads);
    const MomentReport m = moments(p);
    CHECK(m.expected_endpoint == m1.expected_endpoint);
    CHECK(m.expected_vertices == m1.expected_vertices);
    const CountEstimate e = estimate_count(15, 12, 6, p, 20000, 9);
    CHECK(e.hits == e1.hits);
    CHECK(e.estimate == e1.estimate);
    const auto s = sample_conditioned_many(p, c, {}, 12, 4);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i].nu == s1[i].nu);
    CHECK(convex_probability_mc(2, 50000, 3).hits == r1.hits);
  }
  configure_threads();
}
