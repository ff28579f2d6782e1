// Serial twins against the OpenMP kernels. Threads follow
// CONVEXCHAINS_THREADS / OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "convexchains/ensemble.hpp"
#include "convexchains/parallel.hpp"
#include "convexchains/randommodel.hpp"

using namespace convexchains;

namespace {

const EnsembleParams& endpoint_params() {
  static const EnsembleParams p = calibrate(10000, EndpointPenalty{1.0}).params;
  return p;
}

void BM_Moments(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(parallel ? moments(endpoint_params()) : moments_serial(endpoint_params()));
  }
}

void BM_Covariance(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(parallel ? covariance(endpoint_params()) : covariance_serial(endpoint_params()));
  }
}

void BM_EstimateCount(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  const EnsembleParams p = EnsembleParams::endpoint(0.56, 0.56, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(parallel ? estimate_count(8, 8, 4, p, 100000, 1)
                                      : estimate_count_serial(8, 8, 4, p, 100000, 1));
  }
}

void BM_ConditionedSamples(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  const Calibration cal = calibrate(100, FewVertices{0.5, 1.0}, RefineOptions{true});
  Constraint c;
  c.endpoint = LatticePoint{100, 100};
  c.vertices = 10;
  for (auto _ : state) {
    benchmark::DoNotOptimize(parallel ? sample_conditioned_many(cal.params, c, {1.0}, 64, 7)
                                      : sample_conditioned_many_serial(cal.params, c, {1.0}, 64, 7));
  }
}

void BM_RandomModel(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(parallel ? convex_probability_mc(3, 1'000'000, 5)
                                      : convex_probability_mc_serial(3, 1'000'000, 5));
  }
}

void BM_AngularMasses(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  std::vector<double> edges;
  for (int j = 0; j <= 16; ++j) edges.push_back(1.5707963267948966 * j / 16);
  for (auto _ : state) {
    benchmark::DoNotOptimize(parallel ? angular_masses(endpoint_params(), edges)
                                      : angular_masses_serial(endpoint_params(), edges));
  }
}

}  // namespace

// Arg 0 = serial twin, 1 = OpenMP.
BENCHMARK(BM_Moments)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Covariance)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EstimateCount)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConditionedSamples)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RandomModel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AngularMasses)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  configure_threads();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
