#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "convexchains/analytic.hpp"
#include "convexchains/ensemble.hpp"
#include "convexchains/errors.hpp"

namespace convexchains {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Unknowns of the Newton solve and how they map onto parameters.
enum class Unknown { z_sym, z1, z2, z_len, lambda, y_mixed, z_mixed };

struct Problem {
  EnsembleParams base;
  std::vector<Unknown> unknowns;
  std::vector<std::pair<int, double>> targets;  // (moment index, value)
};

// moment index: 0 = X1, 1 = X2, 2 = N, 3 = length
double moment_value(const MomentReport& r, int index) {
  switch (index) {
    case 0:
      return r.expected_endpoint[0];
    case 1:
      return r.expected_endpoint[1];
    case 2:
      return r.expected_vertices;
    default:
      return r.expected_length;
  }
}

std::vector<double> encode_unknowns(const Problem& pb, const EnsembleParams& p) {
  std::vector<double> u;
  for (Unknown k : pb.unknowns) {
    switch (k) {
      case Unknown::z_sym:
      case Unknown::z1:
        u.push_back(std::log(-std::log(p.z1)));
        break;
      case Unknown::z2:
        u.push_back(std::log(-std::log(p.z2)));
        break;
      case Unknown::z_len:
        u.push_back(std::log(-std::log(p.z)));
        break;
      case Unknown::lambda:
        u.push_back(std::log(p.lambda));
        break;
      case Unknown::y_mixed:
        u.push_back(std::log(p.y));
        break;
      case Unknown::z_mixed:
        u.push_back(std::log(p.z));
        break;
    }
  }
  return u;
}

EnsembleParams decode_unknowns(const Problem& pb, const std::vector<double>& u) {
  EnsembleParams p = pb.base;
  for (std::size_t i = 0; i < u.size(); ++i) {
    switch (pb.unknowns[i]) {
      case Unknown::z_sym:
        p.z1 = p.z2 = std::exp(-std::exp(u[i]));
        break;
      case Unknown::z1:
        p.z1 = std::exp(-std::exp(u[i]));
        break;
      case Unknown::z2:
        p.z2 = std::exp(-std::exp(u[i]));
        break;
      case Unknown::z_len:
        p.z = std::exp(-std::exp(u[i]));
        break;
      case Unknown::lambda:
        p.lambda = std::exp(u[i]);
        break;
      case Unknown::y_mixed:
        p.y = std::exp(u[i]);
        break;
      case Unknown::z_mixed:
        p.z = std::exp(u[i]);
        break;
    }
  }
  return p;
}

bool residuals(const Problem& pb, const std::vector<double>& u, std::vector<double>& r) {
  EnsembleParams p = decode_unknowns(pb, u);
  try {
    p.validate();
    const MomentReport m = moments(p);
    r.resize(pb.targets.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      r[i] = moment_value(m, pb.targets[i].first) / pb.targets[i].second - 1.0;
    }
  } catch (const DomainError&) {
    return false;
  } catch (const ResourceError&) {
    return false;
  }
  for (double v : r) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double max_abs(const std::vector<double>& r) {
  double m = 0.0;
  for (double v : r) m = std::max(m, std::fabs(v));
  return m;
}

// Solves J d = -r in place by Gaussian elimination with partial pivoting.
bool solve_linear(std::vector<std::vector<double>> J, std::vector<double> r, std::vector<double>& d) {
  const std::size_t n = r.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < n; ++i) {
      if (std::fabs(J[i][c]) > std::fabs(J[piv][c])) piv = i;
    }
    if (!(std::fabs(J[piv][c]) > 0.0)) return false;
    std::swap(J[c], J[piv]);
    std::swap(r[c], r[piv]);
    for (std::size_t i = c + 1; i < n; ++i) {
      const double f = J[i][c] / J[c][c];
      for (std::size_t k = c; k < n; ++k) J[i][k] -= f * J[c][k];
      r[i] -= f * r[c];
    }
  }
  d.assign(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = -r[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= J[i][k] * d[k];
    d[i] = s / J[i][i];
  }
  return true;
}

Problem make_problem(const EnsembleParams& start, const MomentTargets& t) {
  Problem pb;
  pb.base = start;
  auto need = [](bool ok, const char* what) {
    if (!ok) throw DomainError(what);
  };
  switch (start.kind) {
    case EnsembleKind::endpoint: {
      need(t.x1.has_value() || t.x2.has_value(), "endpoint refinement needs an endpoint target");
      need(!t.length, "endpoint refinement does not match length");
      const bool symmetric = start.z1 == start.z2 && (!t.x1 || !t.x2 || *t.x1 == *t.x2);
      if (symmetric) {
        pb.unknowns.push_back(Unknown::z_sym);
        pb.targets.emplace_back(t.x1 ? 0 : 1, t.x1 ? *t.x1 : *t.x2);
      } else {
        need(t.x1 && t.x2, "asymmetric endpoint refinement needs both coordinates");
        pb.unknowns.push_back(Unknown::z1);
        pb.unknowns.push_back(Unknown::z2);
        pb.targets.emplace_back(0, *t.x1);
        pb.targets.emplace_back(1, *t.x2);
      }
      break;
    }
    case EnsembleKind::length:
      need(t.length.has_value(), "length refinement needs a length target");
      pb.unknowns.push_back(Unknown::z_len);
      pb.targets.emplace_back(3, *t.length);
      break;
    case EnsembleKind::mixed:
      need(t.length && (t.x1 || t.x2), "mixed refinement needs endpoint and length targets");
      need(!t.vertices, "mixed ensemble has no vertex penalty to refine");
      pb.unknowns.push_back(Unknown::y_mixed);
      pb.unknowns.push_back(Unknown::z_mixed);
      pb.targets.emplace_back(t.x1 ? 0 : 1, t.x1 ? *t.x1 : *t.x2);
      pb.targets.emplace_back(3, *t.length);
      break;
  }
  if (t.vertices && start.kind != EnsembleKind::mixed) {
    pb.unknowns.push_back(Unknown::lambda);
    pb.targets.emplace_back(2, *t.vertices);
  }
  for (const auto& [idx, v] : pb.targets) {
    (void)idx;
    need(v > 0.0, "refinement targets must be positive");
  }
  return pb;
}

}  // namespace

EnsembleParams refine(const EnsembleParams& start, const MomentTargets& targets,
                      const RefineOptions& options, int* iterations) {
  start.validate();
  const Problem pb = make_problem(start, targets);
  std::vector<double> u = encode_unknowns(pb, start);
  std::vector<double> r;
  if (!residuals(pb, u, r)) throw DomainError("refinement start point is invalid");
  const std::size_t n = u.size();
  int it = 0;
  for (; it < options.max_iterations && max_abs(r) > options.tolerance; ++it) {
    std::vector<std::vector<double>> J(n, std::vector<double>(n, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> up = u;
      const double h = 1e-6 * std::max(1.0, std::fabs(u[j]));
      up[j] += h;
      std::vector<double> rp;
      if (!residuals(pb, up, rp)) {
        up[j] = u[j] - h;
        if (!residuals(pb, up, rp)) throw ConvergenceError("refine: Jacobian step left the domain", r);
        for (std::size_t i = 0; i < n; ++i) J[i][j] = (r[i] - rp[i]) / h;
      } else {
        for (std::size_t i = 0; i < n; ++i) J[i][j] = (rp[i] - r[i]) / h;
      }
    }
    std::vector<double> d;
    if (!solve_linear(J, r, d)) throw ConvergenceError("refine: singular Jacobian", r);
    double step = 1.0;
    bool improved = false;
    for (int k = 0; k < 40; ++k, step *= 0.5) {
      std::vector<double> un = u;
      for (std::size_t i = 0; i < n; ++i) un[i] += step * d[i];
      std::vector<double> rn;
      if (residuals(pb, un, rn) && max_abs(rn) < max_abs(r)) {
        u = std::move(un);
        r = std::move(rn);
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  if (iterations) *iterations = it;
  if (max_abs(r) > options.tolerance) {
    std::ostringstream os;
    os << "refine did not reach relative residual " << options.tolerance << " (max " << max_abs(r)
       << ")";
    throw ConvergenceError(os.str(), r);
  }
  return decode_unknowns(pb, u);
}

FamilyParameter mixed_family_parameter(const EnsembleParams& params) {
  if (params.kind != EnsembleKind::mixed) throw DomainError("family parameter needs mixed parameters");
  // kernel -(a cos(theta - pi/4) + d) with a = sqrt(2) ln y, d = ln z
  const double a = std::sqrt(2.0) * std::log(params.y);
  const double d = std::log(params.z);
  if (a == 0.0) return {FamilyBranch::circle, 0.0};
  if (a < 0.0) return {FamilyBranch::alpha, d / a};
  return {FamilyBranch::beta, -d / a};
}

namespace {

EnsembleParams endpoint_start(double n, double delta, double lambda) {
  const double z = 1.0 - delta / std::cbrt(n);
  if (!(z > 0.0)) throw DomainError("n too small for the asymptotic calibration (z <= 0)");
  return EnsembleParams::endpoint(z, z, lambda);
}

EnsembleParams length_start(double n, double delta, double lambda) {
  const double z = 1.0 - std::cbrt(std::numbers::pi) * delta / std::cbrt(n);
  if (!(z > 0.0)) throw DomainError("n too small for the asymptotic calibration (z <= 0)");
  return EnsembleParams::length(z, lambda);
}

}  // namespace

Calibration calibrate(std::int64_t n_int, const CalibrationTarget& target,
                      const RefineOptions& options) {
  if (n_int < 1) throw DomainError("calibrate: n must be at least 1");
  const double n = static_cast<double>(n_int);
  const double n23 = std::cbrt(n * n);
  Calibration cal;
  cal.target_endpoint = n;
  cal.target_vertices = kNaN;
  cal.target_length = kNaN;
  bool match_vertices = false;

  if (const auto* t = std::get_if<EndpointPenalty>(&target)) {
    const GrowthConstants g = growth_constants(t->lambda);
    cal.params = endpoint_start(n, g.delta, t->lambda);
    cal.target_vertices = g.c * n23;
  } else if (const auto* t = std::get_if<EndpointVertexConstant>(&target)) {
    const double lambda = invert_c(t->c);
    cal.params = endpoint_start(n, growth_constants(lambda).delta, lambda);
    cal.target_vertices = t->c * n23;
    match_vertices = true;
  } else if (const auto* t = std::get_if<FewVertices>(&target)) {
    if (!(t->s > 0.0 && t->s < 2.0 / 3.0)) throw DomainError("few-vertices calibration needs 0 < s < 2/3");
    if (!(t->c > 0.0)) throw DomainError("few-vertices calibration needs c > 0");
    const double z = 1.0 - t->c / std::pow(n, 1.0 - t->s);
    if (!(z > 0.0)) throw DomainError("n too small for the asymptotic calibration (z <= 0)");
    cal.params = EnsembleParams::endpoint(z, z, t->c * t->c * t->c * std::pow(n, 3.0 * t->s - 2.0));
    cal.target_vertices = t->c * std::pow(n, t->s);
    match_vertices = true;
  } else if (const auto* t = std::get_if<LengthPenalty>(&target)) {
    const GrowthConstants g = growth_constants(t->lambda);
    cal.params = length_start(n, g.delta, t->lambda);
    cal.target_endpoint = kNaN;
    cal.target_length = n;
    cal.target_vertices = jarnik_constants(t->lambda).c_j * n23;
  } else if (const auto* t = std::get_if<LengthVertexConstant>(&target)) {
    const double scale = std::cbrt(std::numbers::pi) / 2.0;
    if (!(t->c_j > 0.0 && t->c_j < jarnik_max_constant())) {
      std::ostringstream os;
      os.precision(10);
      os << "length vertex constant must lie in (0, 3/(2 pi^(1/3)) = " << jarnik_max_constant() << ")";
      throw DomainError(os.str());
    }
    const double lambda = invert_c(t->c_j / scale);
    cal.params = length_start(n, growth_constants(lambda).delta, lambda);
    cal.target_endpoint = kNaN;
    cal.target_length = n;
    cal.target_vertices = t->c_j * n23;
    match_vertices = true;
  } else if (const auto* t = std::get_if<MixedLength>(&target)) {
    const FamilyParameter fp = solve_family_parameter(t->L);
    // angular kernel b (param +- cos(theta - pi/4)) with the scale b fixed
    // by E X1 = n
    const double b = std::cbrt(2.0 * kZeta3 * family_integral(fp) / kZeta2);
    double gamma = 0.0, delta = -b;
    if (fp.branch == FamilyBranch::alpha) {
      gamma = -b / std::sqrt(2.0);
      delta = -b * fp.value;
    } else if (fp.branch == FamilyBranch::beta) {
      gamma = b / std::sqrt(2.0);
      delta = -b * fp.value;
    }
    const double n13 = std::cbrt(n);
    cal.params = EnsembleParams::mixed(std::exp(gamma / n13), std::exp(delta / n13));
    cal.target_length = t->L * n;
  }

  if (options.refine) {
    MomentTargets mt;
    if (cal.params.kind == EnsembleKind::endpoint) {
      mt.x1 = n;
      mt.x2 = n;
    } else if (cal.params.kind == EnsembleKind::length) {
      mt.length = n;
    } else {
      mt.x1 = n;
      mt.length = cal.target_length;
    }
    if (match_vertices) mt.vertices = cal.target_vertices;
    cal.params = refine(cal.params, mt, options, &cal.iterations);
  }
  if (cal.params.kind == EnsembleKind::mixed) cal.family = mixed_family_parameter(cal.params);
  return cal;
}

}  // namespace convexchains
