#include "convexchains/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "convexchains/errors.hpp"
#include "ensemble_internal.hpp"

namespace convexchains {

const char* to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::endpoint:
      return "endpoint";
    case EnsembleKind::length:
      return "length";
    case EnsembleKind::mixed:
      return "mixed";
  }
  return "?";
}

EnsembleParams EnsembleParams::endpoint(double z1, double z2, double lambda) {
  EnsembleParams p;
  p.kind = EnsembleKind::endpoint;
  p.z1 = z1;
  p.z2 = z2;
  p.lambda = lambda;
  p.validate();
  return p;
}

EnsembleParams EnsembleParams::length(double z, double lambda) {
  EnsembleParams p;
  p.kind = EnsembleKind::length;
  p.z = z;
  p.lambda = lambda;
  p.validate();
  return p;
}

EnsembleParams EnsembleParams::mixed(double y, double z) {
  EnsembleParams p;
  p.kind = EnsembleKind::mixed;
  p.y = y;
  p.z = z;
  p.lambda = 1.0;
  p.validate();
  return p;
}

void EnsembleParams::validate() const {
  if (!(truncation_tolerance > 0.0)) throw DomainError("truncation tolerance must be positive");
  switch (kind) {
    case EnsembleKind::endpoint:
      if (!(z1 >= 0.0 && z1 < 1.0 && z2 >= 0.0 && z2 < 1.0)) {
        throw DomainError("endpoint ensemble needs 0 <= z1, z2 < 1");
      }
      break;
    case EnsembleKind::length:
      if (!(z > 0.0 && z < 1.0)) throw DomainError("length ensemble needs 0 < z < 1");
      break;
    case EnsembleKind::mixed: {
      if (!(y > 0.0 && z > 0.0) || !std::isfinite(y) || !std::isfinite(z)) {
        throw DomainError("mixed ensemble needs y, z > 0");
      }
      if (lambda != 1.0) throw DomainError("mixed ensemble has lambda = 1");
      // weight of (1,0) is y z, of (1,1) is y^2 z^sqrt(2); every other
      // direction interpolates between these two on the log scale
      const double ly = std::log(y), lz = std::log(z);
      if (!(ly + lz < 0.0) || !(ly + lz / std::sqrt(2.0) < 0.0)) {
        std::ostringstream os;
        os.precision(10);
        os << "mixed ensemble weights must stay below 1: y z = " << y * z
           << ", y^2 z^sqrt(2) = " << y * y * std::pow(z, std::sqrt(2.0));
        throw DomainError(os.str());
      }
      break;
    }
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be positive");
}

double EnsembleParams::shell_ratio() const {
  switch (kind) {
    case EnsembleKind::endpoint:
      return std::max(z1, z2);
    case EnsembleKind::length:
      return std::pow(z, 1.0 / std::sqrt(2.0));
    case EnsembleKind::mixed: {
      const double lz = std::log(z);
      return std::exp(std::log(y) + std::max(lz, lz / std::sqrt(2.0)));
    }
  }
  return 0.0;
}

double weight(const EnsembleParams& params, Direction x) {
  const double r = std::hypot(static_cast<double>(x.x1), static_cast<double>(x.x2));
  switch (params.kind) {
    case EnsembleKind::endpoint:
      return std::pow(params.z1, static_cast<double>(x.x1)) *
             std::pow(params.z2, static_cast<double>(x.x2));
    case EnsembleKind::length:
      return std::pow(params.z, r);
    case EnsembleKind::mixed:
      return std::exp(static_cast<double>(x.x1 + x.x2) * std::log(params.y) + r * std::log(params.z));
  }
  return 0.0;
}

Marginal marginal_of(double rho, double lambda) {
  Marginal m;
  m.rho = rho;
  m.lambda = lambda;
  const double d = 1.0 + (lambda - 1.0) * rho;
  m.p_zero = (1.0 - rho) / d;
  m.p_active = lambda * rho / d;
  return m;
}

Marginal marginal(const EnsembleParams& params, Direction x) {
  const double rho = weight(params, x);
  if (!(rho < 1.0)) throw DomainError("direction weight is not below 1");
  return marginal_of(rho, params.kind == EnsembleKind::mixed ? 1.0 : params.lambda);
}

double Marginal::pmf(std::int64_t k) const {
  if (k < 0) return 0.0;
  if (k == 0) return p_zero;
  return p_active * (1.0 - rho) * std::pow(rho, static_cast<double>(k - 1));
}

DirectionMoments direction_moments(double rho, double lambda) {
  DirectionMoments m;
  const double d = 1.0 + (lambda - 1.0) * rho;
  const double om = 1.0 - rho;
  const double lr = lambda * rho;
  m.p_active = lr / d;
  m.mean = lr / (om * d);
  m.var = lr * ((1.0 + rho) * d - lr) / (om * om * d * d);
  m.cov_active = lr / (d * d);
  m.var_active = lr * om / (d * d);
  return m;
}

namespace detail {

double shell_tail(double q, std::int64_t M, int power) {
  if (q <= 0.0) return 0.0;
  const double lq = std::log(q);
  double sum = 0.0;
  for (std::int64_t m = M + 1;; ++m) {
    const double md = static_cast<double>(m);
    const double t = std::exp(power * std::log(md) + md * lq);
    sum += t;
    const double r = std::pow((md + 1.0) / md, power) * q;
    if (r < 1.0) {
      const double rest = t * r / (1.0 - r);
      if (rest <= 1e-3 * sum || rest == 0.0) return sum + rest;
    }
    if (m - M > 400'000'000) throw ResourceError("shell tail does not converge");
  }
}

double moment_tail(const EnsembleParams& p, double q, std::int64_t M) {
  const double lam = std::max(1.0, p.lambda);
  return lam / (1.0 - q) * shell_tail(q, M, 2);
}

double covariance_tail(const EnsembleParams& p, double q, std::int64_t M) {
  const double lam = std::max(1.0, p.lambda);
  return 2.0 * lam / ((1.0 - q) * (1.0 - q)) * shell_tail(q, M, 4);
}

double prefactor_tail(const EnsembleParams& p, double q, std::int64_t M) {
  const double lam = std::max(1.0, p.lambda);
  return lam / (1.0 - q) * shell_tail(q, M, 1);
}

double activation_tail(const EnsembleParams& p, double q, std::int64_t M) {
  const double lam = std::max(1.0, p.lambda);
  return 2.0 * lam * shell_tail(q, M, 1);
}

std::int64_t cutoff(double q, double tol, const std::function<double(std::int64_t)>& bound) {
  if (q <= 0.0) return 0;
  if (bound(0) < tol) return 0;
  std::int64_t hi = 1;
  while (bound(hi) >= tol) {
    hi *= 2;
    if (hi > (std::int64_t{1} << 26)) throw ResourceError("truncation needs too many shells");
  }
  std::int64_t lo = hi / 2;  // bound(lo) >= tol or lo = 0
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    (bound(mid) < tol ? hi : lo) = mid;
  }
  return hi;
}

double lambda_of(const EnsembleParams& p) { return p.kind == EnsembleKind::mixed ? 1.0 : p.lambda; }

}  // namespace detail

namespace {

using detail::lambda_of;

std::array<double, 4> shell_moments(const EnsembleParams& p, std::int64_t m) {
  std::array<double, 4> s{0.0, 0.0, 0.0, 0.0};
  const double lam = lambda_of(p);
  for_each_in_shell(m, [&](Direction x) {
    const double rho = weight(p, x);
    if (rho <= 0.0) return;
    const DirectionMoments dm = direction_moments(rho, lam);
    s[0] += static_cast<double>(x.x1) * dm.mean;
    s[1] += static_cast<double>(x.x2) * dm.mean;
    s[2] += dm.p_active;
    s[3] += std::hypot(static_cast<double>(x.x1), static_cast<double>(x.x2)) * dm.mean;
  });
  return s;
}

MomentReport moments_impl(const EnsembleParams& params, bool parallel) {
  params.validate();
  const double q = params.shell_ratio();
  const double tol = params.truncation_tolerance;
  const std::int64_t M =
      detail::cutoff(q, tol, [&](std::int64_t m) { return detail::moment_tail(params, q, m); });
  std::vector<std::array<double, 4>> shells(static_cast<std::size_t>(M + 1));
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
  for (std::int64_t m = 1; m <= M; ++m) shells[static_cast<std::size_t>(m)] = shell_moments(params, m);
  MomentReport r;
  for (std::int64_t m = 1; m <= M; ++m) {
    const auto& s = shells[static_cast<std::size_t>(m)];
    r.expected_endpoint[0] += s[0];
    r.expected_endpoint[1] += s[1];
    r.expected_vertices += s[2];
    r.expected_length += s[3];
  }
  r.max_shell = M;
  r.truncation_bound = detail::moment_tail(params, q, M);
  return r;
}

using CovShell = std::array<double, 8>;

CovShell shell_covariance(const EnsembleParams& p, std::int64_t m) {
  CovShell s{};
  const double lam = lambda_of(p);
  for_each_in_shell(m, [&](Direction x) {
    const double rho = weight(p, x);
    if (rho <= 0.0) return;
    const DirectionMoments dm = direction_moments(rho, lam);
    const double a = static_cast<double>(x.x1), b = static_cast<double>(x.x2);
    const double r = std::hypot(a, b);
    s[0] += a * a * dm.var;
    s[1] += a * b * dm.var;
    s[2] += b * b * dm.var;
    s[3] += a * dm.cov_active;
    s[4] += b * dm.cov_active;
    s[5] += dm.var_active;
    s[6] += r * r * dm.var;
    s[7] += r * dm.cov_active;
  });
  return s;
}

CovarianceReport covariance_impl(const EnsembleParams& params, bool parallel) {
  params.validate();
  const double q = params.shell_ratio();
  const double tol = params.truncation_tolerance;
  const std::int64_t M =
      detail::cutoff(q, tol, [&](std::int64_t m) { return detail::covariance_tail(params, q, m); });
  std::vector<CovShell> shells(static_cast<std::size_t>(M + 1));
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
  for (std::int64_t m = 1; m <= M; ++m) shells[static_cast<std::size_t>(m)] = shell_covariance(params, m);
  CovShell t{};
  for (std::int64_t m = 1; m <= M; ++m) {
    for (std::size_t i = 0; i < t.size(); ++i) t[i] += shells[static_cast<std::size_t>(m)][i];
  }
  CovarianceReport r;
  r.matrix = {{{t[0], t[1], t[3]}, {t[1], t[2], t[4]}, {t[3], t[4], t[5]}}};
  r.length_variance = t[6];
  r.length_vertex_covariance = t[7];
  r.max_shell = M;
  r.truncation_bound = detail::covariance_tail(params, q, M);
  return r;
}

// Sector of polar angle theta: pairs (index, share).
template <class Add>
void assign_sector(const std::vector<double>& edges, double theta, Add&& add) {
  constexpr double eps = 1e-12;
  const std::size_t J = edges.size() - 1;
  if (theta < edges.front() - eps || theta > edges.back() + eps) return;
  auto it = std::upper_bound(edges.begin(), edges.end(), theta);
  std::size_t j = static_cast<std::size_t>(it - edges.begin());  // edges[j-1] <= theta < edges[j]
  // on-edge test against the nearest edge
  for (std::size_t e : {j == 0 ? std::size_t{0} : j - 1, std::min(j, J)}) {
    if (std::fabs(theta - edges[e]) <= eps) {
      if (e == 0) {
        add(0, 1.0);
      } else if (e == J) {
        add(J - 1, 1.0);
      } else {
        add(e - 1, 0.5);
        add(e, 0.5);
      }
      return;
    }
  }
  add(std::min(j, J) - 1, 1.0);
}

void check_edges(const std::vector<double>& edges) {
  if (edges.size() < 2) throw DomainError("angular sectors need at least two edges");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!(edges[i] >= 0.0 && edges[i] <= std::numbers::pi / 2.0 + 1e-12)) {
      throw DomainError("sector edges must lie in [0, pi/2]");
    }
    if (i > 0 && !(edges[i] > edges[i - 1])) throw DomainError("sector edges must be strictly increasing");
  }
}

double polar_angle(Direction x) {
  return std::atan2(static_cast<double>(x.x2), static_cast<double>(x.x1));
}

std::vector<double> angular_impl(const EnsembleParams& params, const std::vector<double>& edges,
                                 bool parallel) {
  params.validate();
  check_edges(edges);
  const std::size_t J = edges.size() - 1;
  const double q = params.shell_ratio();
  const std::int64_t M = detail::cutoff(q, params.truncation_tolerance, [&](std::int64_t m) {
    return detail::moment_tail(params, q, m);
  });
  const double lam = lambda_of(params);
  std::vector<std::vector<double>> shells(static_cast<std::size_t>(M + 1));
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
  for (std::int64_t m = 1; m <= M; ++m) {
    std::vector<double> s(J, 0.0);
    for_each_in_shell(m, [&](Direction x) {
      const double rho = weight(params, x);
      if (rho <= 0.0) return;
      const double mass = std::hypot(static_cast<double>(x.x1), static_cast<double>(x.x2)) *
                          direction_moments(rho, lam).mean;
      assign_sector(edges, polar_angle(x), [&](std::size_t j, double share) { s[j] += share * mass; });
    });
    shells[static_cast<std::size_t>(m)] = std::move(s);
  }
  std::vector<double> out(J, 0.0);
  for (std::int64_t m = 1; m <= M; ++m) {
    for (std::size_t j = 0; j < J; ++j) out[j] += shells[static_cast<std::size_t>(m)][j];
  }
  return out;
}

}  // namespace

MomentReport moments(const EnsembleParams& params) { return moments_impl(params, true); }
MomentReport moments_serial(const EnsembleParams& params) { return moments_impl(params, false); }

bool CovarianceReport::positive_semidefinite() const {
  const auto& a = matrix;
  const double scale = std::max({std::fabs(a[0][0]), std::fabs(a[1][1]), std::fabs(a[2][2]), 1e-300});
  const double tol = 1e-10;
  // every principal minor nonnegative (relative to the matrix scale)
  for (int i = 0; i < 3; ++i) {
    if (a[i][i] < -tol * scale) return false;
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const double m2 = a[i][i] * a[j][j] - a[i][j] * a[j][i];
      if (m2 < -tol * std::sqrt(a[i][i] * a[i][i] * a[j][j] * a[j][j]) - 1e-300) return false;
    }
  }
  const double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                     a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                     a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  return det >= -tol * std::fabs(a[0][0] * a[1][1] * a[2][2]);
}

CovarianceReport covariance(const EnsembleParams& params) { return covariance_impl(params, true); }
CovarianceReport covariance_serial(const EnsembleParams& params) {
  return covariance_impl(params, false);
}

LogPrefactor log_prefactor(const EnsembleParams& params) {
  params.validate();
  const double q = params.shell_ratio();
  const std::int64_t M = detail::cutoff(q, params.truncation_tolerance, [&](std::int64_t m) {
    return detail::prefactor_tail(params, q, m);
  });
  return {log_prefactor_shells(params, M), detail::prefactor_tail(params, q, M)};
}

double log_prefactor_shells(const EnsembleParams& params, std::int64_t max_shell) {
  params.validate();
  const double lam = lambda_of(params);
  double total = 0.0;
  for (std::int64_t m = 1; m <= max_shell; ++m) {
    double s = 0.0;
    for_each_in_shell(m, [&](Direction x) {
      const double rho = weight(params, x);
      s += std::log1p((lam - 1.0) * rho) - std::log1p(-rho);
    });
    total += s;
  }
  return total;
}

std::vector<double> angular_masses(const EnsembleParams& params, const std::vector<double>& edges) {
  return angular_impl(params, edges, true);
}
std::vector<double> angular_masses_serial(const EnsembleParams& params,
                                          const std::vector<double>& edges) {
  return angular_impl(params, edges, false);
}

std::vector<double> sector_masses(const VertexMap& nu, const std::vector<double>& edges) {
  check_edges(edges);
  std::vector<double> out(edges.size() - 1, 0.0);
  for (const auto& [x, k] : nu) {
    const double mass =
        std::hypot(static_cast<double>(x.x1), static_cast<double>(x.x2)) * static_cast<double>(k);
    assign_sector(edges, polar_angle(x), [&](std::size_t j, double share) { out[j] += share * mass; });
  }
  return out;
}

}  // namespace convexchains
