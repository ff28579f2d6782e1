#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "convexchains/chain.hpp"
#include "convexchains/lattice.hpp"
#include "convexchains/rng.hpp"
#include "convexchains/shapes.hpp"

namespace convexchains {

enum class EnsembleKind { endpoint, length, mixed };

const char* to_string(EnsembleKind kind);

// Parameters of one of the three product measures on multiplicity functions.
//   endpoint: rho_x = z1^x1 z2^x2, vertex penalty lambda
//   length:   rho_x = z^|x|,       vertex penalty lambda
//   mixed:    rho_x = y^(x1+x2) z^|x|, lambda = 1
struct EnsembleParams {
  EnsembleKind kind = EnsembleKind::endpoint;
  double z1 = 0.0;
  double z2 = 0.0;
  double y = 1.0;
  double z = 0.0;
  double lambda = 1.0;
  double truncation_tolerance = 1e-12;

  static EnsembleParams endpoint(double z1, double z2, double lambda);
  static EnsembleParams length(double z, double lambda);
  static EnsembleParams mixed(double y, double z);

  // Throws DomainError when the weights are not all in [0, 1).
  void validate() const;
  // q < 1 with weight(x) <= q^(x1 + x2) for every direction.
  double shell_ratio() const;
};

double weight(const EnsembleParams& params, Direction x);

// Law of nu(x): P(0) = p_zero, P(k) = p_active (1 - rho) rho^(k-1) for k >= 1.
struct Marginal {
  double rho = 0.0;
  double lambda = 1.0;
  double p_zero = 1.0;
  double p_active = 0.0;

  double pmf(std::int64_t k) const;
};

Marginal marginal(const EnsembleParams& params, Direction x);
Marginal marginal_of(double rho, double lambda);

// Per-direction moments of nu and of the indicator 1{nu != 0}.
struct DirectionMoments {
  double mean = 0.0;           // E nu
  double var = 0.0;            // Var nu
  double cov_active = 0.0;     // Cov(1{nu != 0}, nu)
  double var_active = 0.0;     // Var 1{nu != 0}
  double p_active = 0.0;
};

DirectionMoments direction_moments(double rho, double lambda);

struct MomentReport {
  std::array<double, 2> expected_endpoint{0.0, 0.0};
  double expected_vertices = 0.0;
  double expected_length = 0.0;
  double truncation_bound = 0.0;  // certified bound on the neglected tail
  std::int64_t max_shell = 0;     // shells x1 + x2 <= max_shell were summed
};

MomentReport moments(const EnsembleParams& params);
MomentReport moments_serial(const EnsembleParams& params);

// Covariance of (X1, X2, N) = (sum x1 nu, sum x2 nu, sum 1{nu != 0}), plus
// the length functional.
struct CovarianceReport {
  std::array<std::array<double, 3>, 3> matrix{};
  double length_variance = 0.0;
  double length_vertex_covariance = 0.0;
  double truncation_bound = 0.0;
  std::int64_t max_shell = 0;

  bool positive_semidefinite() const;
};

CovarianceReport covariance(const EnsembleParams& params);
CovarianceReport covariance_serial(const EnsembleParams& params);

// sum_x [ln(1 + (lambda-1) rho_x) - ln(1 - rho_x)] = -ln prod_x P(nu(x) = 0).
struct LogPrefactor {
  double value = 0.0;
  double tail_bound = 0.0;
};

LogPrefactor log_prefactor(const EnsembleParams& params);
// The same sum restricted to shells x1 + x2 <= max_shell (finite, exact).
double log_prefactor_shells(const EnsembleParams& params, std::int64_t max_shell);

// Independent-coordinate sampler visiting the directions shell by shell.
// Shells are truncated where the remaining activation mass drops below the
// tolerance, or at an explicit max_shell.
class ProductSampler {
 public:
  explicit ProductSampler(const EnsembleParams& params);
  ProductSampler(const EnsembleParams& params, std::int64_t max_shell);

  std::int64_t max_shell() const noexcept { return max_shell_; }
  // Upper bound on sum of P(nu(x) != 0) over skipped shells.
  double neglected_mass() const noexcept { return neglected_mass_; }
  const EnsembleParams& params() const noexcept { return params_; }

  // Calls visit(direction, multiplicity) for each active direction in shell
  // order; visit returns false to stop early. Returns true if not stopped.
  template <class Visit>
  bool visit(Rng& rng, Visit&& visit) const;

  VertexMap draw(Rng& rng) const;

 private:
  EnsembleParams params_;
  std::int64_t max_shell_ = 0;
  double neglected_mass_ = 0.0;
  std::vector<double> shell_bound_;     // activation bound for shell m
  std::vector<double> log_skip_;        // ln(1 - shell_bound_[m])
};

struct Sample {
  VertexMap nu;
  double neglected_mass = 0.0;
};

Sample sample(const EnsembleParams& params, std::uint64_t seed);

// Constraint on the sampled chain. Absent fields are unconstrained.
struct Constraint {
  std::optional<LatticePoint> endpoint;
  std::optional<std::int64_t> vertices;
  std::optional<std::array<double, 2>> length;  // [lo, hi)
};

struct ConditionedOptions {
  // Half-width of the acceptance window in standard deviations of the
  // constrained coordinates; 0 means exact conditioning. The length
  // interval is always exact.
  double window = 0.0;
  std::int64_t max_attempts = 10'000'000;
};

struct ConditionedSample {
  ConvexChain chain;
  VertexMap nu;
  std::int64_t attempts = 0;
  // Achieved offsets from the targets (X1 - n1, X2 - n2, N - N0).
  std::array<double, 3> offsets{0.0, 0.0, 0.0};
};

ConditionedSample sample_conditioned(const EnsembleParams& params, const Constraint& constraint,
                                     const ConditionedOptions& options, std::uint64_t seed);

// count independent conditioned samples; sample i uses stream i of seed.
std::vector<ConditionedSample> sample_conditioned_many(const EnsembleParams& params,
                                                       const Constraint& constraint,
                                                       const ConditionedOptions& options,
                                                       std::int64_t count, std::uint64_t seed);
std::vector<ConditionedSample> sample_conditioned_many_serial(const EnsembleParams& params,
                                                              const Constraint& constraint,
                                                              const ConditionedOptions& options,
                                                              std::int64_t count,
                                                              std::uint64_t seed);

struct CountEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  double log_prefactor = 0.0;  // ln of the factor multiplying the hit rate
  std::int64_t hits = 0;
  std::int64_t replicas = 0;
  bool zero_hits = false;
  double upper_bound_95 = 0.0;  // one-sided bound, meaningful when zero_hits
};

// Count of chains ending at (n1, n2) with N vertices, from the hit rate of
// the product measure and the exact prefactor.
CountEstimate estimate_count(std::int64_t n1, std::int64_t n2, std::int64_t vertices,
                             const EnsembleParams& params, std::int64_t replicas,
                             std::uint64_t seed);
CountEstimate estimate_count_serial(std::int64_t n1, std::int64_t n2, std::int64_t vertices,
                                    const EnsembleParams& params, std::int64_t replicas,
                                    std::uint64_t seed);

// Count of chains with N vertices and length in [n, n+1). The density of the
// conditioned length measure is only known up to a factor in [1, 1/z], so
// the result is an interval.
struct LengthCountEstimate {
  double low = 0.0;
  double high = 0.0;
  double relative_standard_error = 0.0;
  std::int64_t hits = 0;
  std::int64_t replicas = 0;
  bool zero_hits = false;
};

LengthCountEstimate estimate_length_count(std::int64_t n, std::int64_t vertices,
                                          const EnsembleParams& params, std::int64_t replicas,
                                          std::uint64_t seed);

// Expected length mass sum |x| nu(x) of the directions in each sector
// (edges[j], edges[j+1]) of polar angle. Directions on an interior edge are
// split evenly between its two sectors; those on an outer edge belong to the
// adjacent sector.
std::vector<double> angular_masses(const EnsembleParams& params, const std::vector<double>& edges);
std::vector<double> angular_masses_serial(const EnsembleParams& params,
                                          const std::vector<double>& edges);
// The same sector sums for one sample.
std::vector<double> sector_masses(const VertexMap& nu, const std::vector<double>& edges);

// ---- calibration ----

struct EndpointPenalty {
  double lambda = 1.0;
};
struct EndpointVertexConstant {
  double c = 0.0;  // E N = c n^(2/3)
};
struct FewVertices {
  double s = 0.5;  // E N = c n^s, 0 < s < 2/3
  double c = 1.0;
};
struct LengthPenalty {
  double lambda = 1.0;
};
struct LengthVertexConstant {
  double c_j = 0.0;  // E N = c_j n^(2/3)
};
struct MixedLength {
  double L = 0.0;  // E length = L n, sqrt(2) < L < 2
};

using CalibrationTarget = std::variant<EndpointPenalty, EndpointVertexConstant, FewVertices,
                                       LengthPenalty, LengthVertexConstant, MixedLength>;

struct RefineOptions {
  bool refine = false;
  double tolerance = 1e-10;  // on the relative residuals
  int max_iterations = 60;
};

struct Calibration {
  EnsembleParams params;
  // Moment targets the parameters were calibrated to (NaN when unused).
  double target_endpoint = 0.0;
  double target_vertices = 0.0;
  double target_length = 0.0;
  // Mixed kind: curve-family parameter implied by (y, z) and its branch.
  std::optional<FamilyParameter> family;
  int iterations = 0;
};

Calibration calibrate(std::int64_t n, const CalibrationTarget& target,
                      const RefineOptions& options = {});

// Finite-n targets for refine(); absent fields are not matched.
struct MomentTargets {
  std::optional<double> x1;
  std::optional<double> x2;
  std::optional<double> vertices;
  std::optional<double> length;
};

// Damped Newton on the exact truncated moment sums, solving for as many
// parameters as there are targets:
//   endpoint: z (symmetric x1 = x2 with z1 = z2) or (z1, z2), then lambda;
//   length:   z, then lambda;
//   mixed:    (y, z) from x1 and length.
// Throws ConvergenceError with the last residuals when it stalls.
EnsembleParams refine(const EnsembleParams& start, const MomentTargets& targets,
                      const RefineOptions& options, int* iterations = nullptr);

// Family parameter implied by mixed-kind (y, z) through the angular kernel
// -(sqrt(2) ln y cos(theta - pi/4) + ln z).
FamilyParameter mixed_family_parameter(const EnsembleParams& params);

// ---- inline sampler ----

template <class Visit>
bool ProductSampler::visit(Rng& rng, Visit&& visit) const {
  for (std::int64_t m = 1; m <= max_shell_; ++m) {
    const double bound = shell_bound_[static_cast<std::size_t>(m)];
    if (bound <= 0.0) continue;
    const double log_skip = log_skip_[static_cast<std::size_t>(m)];
    std::int64_t slot = -1;
    while (true) {
      // next candidate slot among x1 = 0..m, each a success w.p. `bound`
      if (bound >= 1.0) {
        ++slot;
      } else {
        const double g = std::floor(std::log(rng.uniform_pos()) / log_skip);
        if (g > static_cast<double>(m)) break;
        slot += 1 + static_cast<std::int64_t>(g);
      }
      if (slot > m) break;
      if (std::gcd(slot, m) != 1) continue;
      const Direction x{slot, m - slot};
      const Marginal mg = marginal(params_, x);
      if (mg.p_active < bound && rng.uniform() * bound >= mg.p_active) continue;
      std::int64_t k = 1;
      if (mg.rho > 0.0) {
        k += static_cast<std::int64_t>(std::floor(std::log(rng.uniform_pos()) / std::log(mg.rho)));
      }
      if (!visit(x, k)) return false;
    }
  }
  return true;
}

}  // namespace convexchains
