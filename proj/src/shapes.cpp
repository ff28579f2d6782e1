#include "convexchains/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "convexchains/errors.hpp"

namespace convexchains {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuarter = kPi / 4.0;
constexpr double kInvSqrt2 = 0.70710678118654752440;

using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;

// Single 61-point rule; callers only use it on pieces much narrower than the
// distance to the nearest pole of the integrand.
template <class F>
double gk(F&& f, double a, double b) {
  return b > a ? Rule::integrate(f, a, b, 0, 0.0) : 0.0;
}

// Integral over [a, b] of an integrand peaked at one endpoint with width
// `scale`: pieces grow geometrically away from the peak.
template <class F>
double gk_peaked(F&& f, double a, double b, bool peak_at_b, double scale) {
  if (!(scale > 0.0)) scale = 1e-300;
  if (scale >= b - a) return gk(f, a, b);
  double total = 0.0;
  double inner = 0.0;
  double outer = scale;
  while (inner < b - a) {
    const double hi = std::min(outer, b - a);
    total += peak_at_b ? gk(f, b - hi, b - inner) : gk(f, a + inner, a + hi);
    inner = hi;
    outer *= 4.0;
  }
  return total;
}

// k(v) with v = u - pi/4; even in v. The distance to the singular value is
// formed without cancellation so peaked integrals stay smooth.
double family_kernel(const FamilyParameter& p, double v) {
  switch (p.branch) {
    case FamilyBranch::alpha: {
      const double gap = p.value + kInvSqrt2;
      const double d = gap - 2.0 * std::sin(0.5 * (v + kQuarter)) * std::sin(0.5 * (v - kQuarter));
      return 1.0 / (d * d * d);
    }
    case FamilyBranch::beta: {
      const double h = std::sin(0.5 * v);
      const double d = (p.value - 1.0) + 2.0 * h * h;
      return 1.0 / (d * d * d);
    }
    case FamilyBranch::circle:
      break;
  }
  return 1.0;
}

// Width of the kernel peak (at |v| = pi/4 for alpha, v = 0 for beta).
double peak_scale(const FamilyParameter& p) {
  switch (p.branch) {
    case FamilyBranch::alpha:
      return std::sqrt(2.0) * std::max(p.value + kInvSqrt2, 0.0);
    case FamilyBranch::beta:
      return std::sqrt(2.0 * std::max(p.value - 1.0, 0.0));
    case FamilyBranch::circle:
      break;
  }
  return 0.0;
}

// int_0^{pi/4} w(v) k(v) dv with the peak handled.
template <class W>
double half_integral(const FamilyParameter& p, W&& w) {
  auto f = [&](double v) { return w(v) * family_kernel(p, v); };
  if (p.branch == FamilyBranch::circle) return gk(f, 0.0, kQuarter);
  return gk_peaked(f, 0.0, kQuarter, p.branch == FamilyBranch::alpha, peak_scale(p));
}

// int_a^b f(u) du for a family integrand in the tangent angle u, refining
// only toward the kernel's peak (u = 0, pi/2 for alpha; u = pi/4 for beta).
template <class F>
double segment_integral(const FamilyParameter& p, F&& f, double a, double b) {
  if (p.branch == FamilyBranch::circle) return gk(f, a, b);
  if (p.branch == FamilyBranch::beta && a < kQuarter && kQuarter < b) {
    return segment_integral(p, f, a, kQuarter) + segment_integral(p, f, kQuarter, b);
  }
  double peak;
  if (p.branch == FamilyBranch::beta) {
    peak = kQuarter;
  } else {
    peak = (a + b < kPi / 2.0) ? 0.0 : kPi / 2.0;
  }
  const double dist = std::min(std::fabs(a - peak), std::fabs(b - peak));
  const double scale = peak_scale(p);
  if (b - a <= 0.5 * (scale + dist)) return gk(f, a, b);
  return gk_peaked(f, a, b, peak >= b, scale);
}

void require_length(double L) {
  if (!(L > std::sqrt(2.0) && L < 2.0)) {
    std::ostringstream os;
    os.precision(12);
    os << "L = " << L
       << " outside (sqrt(2), 2): the limits are the diagonal (L = sqrt(2)) and the two sides "
          "of the unit square (L = 2)";
    throw DomainError(os.str());
  }
}

double cross(Point2 o, Point2 a, Point2 b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

// y on the polyline at abscissa x (x-monotone polyline).
double polyline_height(const std::vector<Point2>& poly, double x) {
  auto it = std::lower_bound(poly.begin(), poly.end(), x,
                             [](const Point2& p, double v) { return p.x < v; });
  if (it == poly.begin()) return poly.front().y;
  if (it == poly.end()) return poly.back().y;
  const Point2 b = *it, a = *(it - 1);
  if (b.x == a.x) return b.y;
  return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
}

// Vertices and side midpoints scaled by (sx, sy).
std::vector<Point2> probe_points(const ConvexChain& chain, double sx, double sy) {
  const auto& v = chain.vertices();
  std::vector<Point2> out;
  out.reserve(2 * v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back({static_cast<double>(v[i].x) / sx, static_cast<double>(v[i].y) / sy});
    if (i + 1 < v.size()) {
      out.push_back({0.5 * static_cast<double>(v[i].x + v[i + 1].x) / sx,
                     0.5 * static_cast<double>(v[i].y + v[i + 1].y) / sy});
    }
  }
  return out;
}

Distance distance_of_points(const std::vector<Point2>& pts, const CurveSpec& curve, bool degenerate) {
  Distance d;
  d.degenerate = degenerate;
  for (const Point2& p : pts) {
    double gap;
    if (curve.kind == CurveKind::parabola) {
      gap = std::fabs(p.y - parabola_height(std::clamp(p.x, 0.0, 1.0)));
    } else if (degenerate) {
      gap = std::fabs(p.y - polyline_height(curve.points, p.x));
    } else {
      gap = point_polyline_distance(p, curve.points);
    }
    d.value = std::max(d.value, gap);
  }
  return d;
}

void require_grid(std::int64_t k) {
  if (k < 2) throw DomainError("curve needs at least 2 grid points");
}

}  // namespace

double parabola_height(double x) {
  const double r = 1.0 - std::sqrt(1.0 - x);
  return r * r;
}

CurveSpec parabola(std::int64_t grid_points) {
  require_grid(grid_points);
  CurveSpec c;
  c.kind = CurveKind::parabola;
  c.nominal_length = 1.0 + std::log(1.0 + std::sqrt(2.0)) / std::sqrt(2.0);
  c.points.resize(static_cast<std::size_t>(grid_points));
  // (2t - t^2, t^2) traces the parabola with sqrt(1 - x) = 1 - t.
  for (std::int64_t i = 0; i < grid_points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(grid_points - 1);
    c.points[static_cast<std::size_t>(i)] = {t * (2.0 - t), t * t};
  }
  c.points.back() = {1.0, 1.0};
  return c;
}

CurveSpec circle_arc(std::int64_t grid_points) {
  require_grid(grid_points);
  CurveSpec c;
  c.kind = CurveKind::circle;
  c.nominal_length = kPi / 2.0;
  c.points.resize(static_cast<std::size_t>(grid_points));
  for (std::int64_t i = 0; i < grid_points; ++i) {
    const double phi = kPi / 2.0 * static_cast<double>(i) / static_cast<double>(grid_points - 1);
    c.points[static_cast<std::size_t>(i)] = {std::sin(phi), 1.0 - std::cos(phi)};
  }
  c.points.back() = {1.0, 1.0};
  return c;
}

double family_length(const FamilyParameter& p) {
  if (p.branch == FamilyBranch::circle) return kPi / 2.0;
  const double i0 = half_integral(p, [](double) { return 1.0; });
  const double i1 = half_integral(p, [](double v) { return std::cos(v); });
  return std::sqrt(2.0) * i0 / i1;
}

double family_integral(const FamilyParameter& p) {
  // cos(v + pi/4) = (cos v - sin v)/sqrt(2); the odd part cancels.
  return std::sqrt(2.0) * half_integral(p, [](double v) { return std::cos(v); });
}

FamilyParameter solve_family_parameter(double L) {
  require_length(L);
  if (L == kPi / 2.0) return {FamilyBranch::circle, 0.0};
  const bool alpha = L > kPi / 2.0;
  // alpha = exp(t) - 1/sqrt(2), L decreasing in t;
  // beta = 1 + exp(t), L increasing in t.
  auto param = [&](double t) {
    return alpha ? FamilyParameter{FamilyBranch::alpha, std::exp(t) - kInvSqrt2}
                 : FamilyParameter{FamilyBranch::beta, 1.0 + std::exp(t)};
  };
  auto excess = [&](double t) {
    const double v = family_length(param(t)) - L;
    return alpha ? -v : v;  // increasing in t on both branches
  };
  double lo = -25.0, hi = 30.0;
  double t = 0.0;
  for (int it = 0; it < 300; ++it) {
    t = 0.5 * (lo + hi);
    const double e = excess(t);
    if (std::fabs(e) <= 1e-12) break;
    (e < 0.0 ? lo : hi) = t;
    if (hi - lo < 1e-15) break;
  }
  FamilyParameter p = param(t);
  if (alpha && std::fabs(p.value) < 1e-13) p.value = 0.0;
  return p;
}

CurveSpec family_curve(double L, std::int64_t grid_points) {
  require_grid(grid_points);
  const FamilyParameter p = solve_family_parameter(L);
  CurveSpec c;
  c.kind = p.branch == FamilyBranch::alpha  ? CurveKind::family_alpha
           : p.branch == FamilyBranch::beta ? CurveKind::family_beta
                                            : CurveKind::circle;
  c.parameter = p.value;
  c.nominal_length = family_length(p);
  const auto k = static_cast<std::size_t>(grid_points);
  std::vector<double> xs(k, 0.0), ys(k, 0.0);
  auto kernel = [&](double u) { return family_kernel(p, u - kQuarter); };
  // Tangent-angle grid: points concentrate where the curve bends.
  for (std::size_t i = 1; i < k; ++i) {
    const double a = kPi / 2.0 * static_cast<double>(i - 1) / static_cast<double>(k - 1);
    const double b = kPi / 2.0 * static_cast<double>(i) / static_cast<double>(k - 1);
    auto fx = [&](double u) { return std::cos(u) * kernel(u); };
    auto fy = [&](double u) { return std::sin(u) * kernel(u); };
    const double dx = segment_integral(p, fx, a, b);
    const double dy = segment_integral(p, fy, a, b);
    xs[i] = xs[i - 1] + dx;
    ys[i] = ys[i - 1] + dy;
  }
  const double norm = 0.5 * (xs.back() + ys.back());
  c.points.resize(k);
  for (std::size_t i = 0; i < k; ++i) c.points[i] = {xs[i] / norm, ys[i] / norm};
  c.points.front() = {0.0, 0.0};
  c.points.back() = {1.0, 1.0};
  return c;
}

CurveSpec polyline_curve(const ConvexChain& chain) {
  const LatticePoint e = chain.endpoint();
  if (e.x <= 0 || e.y <= 0) throw DomainError("polyline_curve: chain endpoint lies on an axis");
  CurveSpec c;
  c.kind = CurveKind::polyline;
  for (const LatticePoint& v : chain.vertices()) {
    c.points.push_back({static_cast<double>(v.x) / static_cast<double>(e.x),
                        static_cast<double>(v.y) / static_cast<double>(e.y)});
  }
  c.nominal_length = polyline_length(c.points);
  return c;
}

Distance sup_distance(const ConvexChain& chain, const CurveSpec& curve, std::int64_t n) {
  if (n <= 0) throw DomainError("sup_distance: n must be positive");
  const LatticePoint e = chain.endpoint();
  const double s = static_cast<double>(n);
  return distance_of_points(probe_points(chain, s, s), curve, e.x <= 0 || e.y <= 0);
}

Distance sup_distance_normalized(const ConvexChain& chain, const CurveSpec& curve) {
  const LatticePoint e = chain.endpoint();
  if (e.x <= 0 || e.y <= 0) {
    const double s = static_cast<double>(std::max<std::int64_t>(std::max(e.x, e.y), 1));
    return distance_of_points(probe_points(chain, s, s), curve, true);
  }
  return distance_of_points(
      probe_points(chain, static_cast<double>(e.x), static_cast<double>(e.y)), curve, false);
}

double point_polyline_distance(Point2 p, const std::vector<Point2>& polyline) {
  if (polyline.empty()) return std::numeric_limits<double>::infinity();
  if (polyline.size() == 1) return std::hypot(p.x - polyline[0].x, p.y - polyline[0].y);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    best = std::min(best, point_segment_distance(p, polyline[i], polyline[i + 1]));
  }
  return best;
}

double polyline_length(const std::vector<Point2>& polyline) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    s += std::hypot(polyline[i + 1].x - polyline[i].x, polyline[i + 1].y - polyline[i].y);
  }
  return s;
}

double curve_sup_distance(const CurveSpec& a, const CurveSpec& b) {
  double d = 0.0;
  for (const Point2& p : a.points) d = std::max(d, point_polyline_distance(p, b.points));
  for (const Point2& p : b.points) d = std::max(d, point_polyline_distance(p, a.points));
  return d;
}

bool is_convex_polyline(const std::vector<Point2>& poly, double tol) {
  for (std::size_t i = 0; i + 2 < poly.size(); ++i) {
    if (cross(poly[i], poly[i + 1], poly[i + 2]) < -tol) return false;
  }
  return true;
}

}  // namespace convexchains
