#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "convexchains/shapes.hpp"

namespace convexchains {

// Whether the points, sorted by x (then y), form with (0,0) and (1,1) a
// chain with strictly increasing coordinates and strictly increasing slopes.
bool is_convex_through_corners(std::vector<Point2> points);

struct ProbabilityEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  double target = 0.0;  // 1 / (k! (k+1)!)
  std::int64_t trials = 0;
  std::int64_t hits = 0;
};

// Frequency with which k uniform points in the unit square are in convex
// position with the two corners. Trials run in fixed blocks, each with its
// own RNG stream.
ProbabilityEstimate convex_probability_mc(int k, std::int64_t trials, std::uint64_t seed);
ProbabilityEstimate convex_probability_mc_serial(int k, std::int64_t trials, std::uint64_t seed);

// 1 / (k! (k+1)!).
mpq_class convex_probability_exact(int k);

}  // namespace convexchains
