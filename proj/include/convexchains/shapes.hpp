#pragma once

#include <cstdint>
#include <vector>

#include "convexchains/chain.hpp"

namespace convexchains {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

enum class CurveKind { parabola, circle, family_alpha, family_beta, polyline };

// A limit-shape curve from (0,0) to (1,1), sampled as a polyline.
struct CurveSpec {
  CurveKind kind = CurveKind::polyline;
  double parameter = 0.0;  // alpha or beta for family curves
  std::vector<Point2> points;
  double nominal_length = 0.0;
};

// y = (1 - sqrt(1 - x))^2 on [0, 1].
double parabola_height(double x);

CurveSpec parabola(std::int64_t grid_points);
// Quarter circle of radius 1 centred at (0, 1).
CurveSpec circle_arc(std::int64_t grid_points);

// Curves of length L > pi/2 use kernel (alpha + cos(u - pi/4))^-3, those
// with L < pi/2 use (beta - cos(u - pi/4))^-3; L = pi/2 is the circle.
enum class FamilyBranch { alpha, beta, circle };

struct FamilyParameter {
  FamilyBranch branch = FamilyBranch::circle;
  double value = 0.0;
};

// Arc length of the normalized family curve with the given parameter.
double family_length(const FamilyParameter& p);
// X(pi/2) = int_0^{pi/2} cos(u) K(u) du, the normalizing integral.
double family_integral(const FamilyParameter& p);

// Unique parameter with family_length = L, for sqrt(2) < L < 2.
FamilyParameter solve_family_parameter(double L);

CurveSpec family_curve(double L, std::int64_t grid_points);

// The chain scaled per axis by its endpoint.
CurveSpec polyline_curve(const ConvexChain& chain);

struct Distance {
  double value = 0.0;
  bool degenerate = false;  // endpoint on an axis: vertical distance only
};

// Parabola: max |y/n - l(x/n)| over vertices and side midpoints.
// Other curves: max Euclidean distance of the points (x/n, y/n) to the
// curve polyline.
Distance sup_distance(const ConvexChain& chain, const CurveSpec& curve, std::int64_t n);

// Same functional with x and y scaled by the chain's own endpoint, for
// chains whose endpoint is only approximately (n, n).
Distance sup_distance_normalized(const ConvexChain& chain, const CurveSpec& curve);

double point_polyline_distance(Point2 p, const std::vector<Point2>& polyline);
double polyline_length(const std::vector<Point2>& polyline);
// Symmetric Hausdorff distance between two sampled curves.
double curve_sup_distance(const CurveSpec& a, const CurveSpec& b);
// Left turns only (slopes nondecreasing), up to tol in the cross product.
bool is_convex_polyline(const std::vector<Point2>& polyline, double tol = 0.0);

}  // namespace convexchains
