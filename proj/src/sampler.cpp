#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "convexchains/ensemble.hpp"
#include "convexchains/errors.hpp"
#include "ensemble_internal.hpp"

namespace convexchains {

namespace {

std::int64_t default_max_shell(const EnsembleParams& p) {
  p.validate();
  const double q = p.shell_ratio();
  return detail::cutoff(q, p.truncation_tolerance,
                        [&](std::int64_t m) { return detail::activation_tail(p, q, m); });
}

}  // namespace

ProductSampler::ProductSampler(const EnsembleParams& params)
    : ProductSampler(params, default_max_shell(params)) {}

ProductSampler::ProductSampler(const EnsembleParams& params, std::int64_t max_shell)
    : params_(params), max_shell_(max_shell) {
  params_.validate();
  if (max_shell < 0) throw DomainError("max_shell must be nonnegative");
  const double q = params_.shell_ratio();
  const double lam = detail::lambda_of(params_);
  neglected_mass_ = detail::activation_tail(params_, q, max_shell_);
  shell_bound_.assign(static_cast<std::size_t>(max_shell_ + 1), 0.0);
  log_skip_.assign(static_cast<std::size_t>(max_shell_ + 1), 0.0);
  double qm = 1.0;
  for (std::int64_t m = 1; m <= max_shell_; ++m) {
    qm *= q;
    const double b = std::min(1.0, marginal_of(qm, lam).p_active);
    shell_bound_[static_cast<std::size_t>(m)] = b;
    log_skip_[static_cast<std::size_t>(m)] = std::log1p(-b);
  }
}

VertexMap ProductSampler::draw(Rng& rng) const {
  VertexMap nu;
  visit(rng, [&](Direction x, std::int64_t k) {
    nu.set(x, k);
    return true;
  });
  return nu;
}

Sample sample(const EnsembleParams& params, std::uint64_t seed) {
  const ProductSampler sampler(params);
  Rng rng(seed);
  return {sampler.draw(rng), sampler.neglected_mass()};
}

namespace {

struct Window {
  bool has_endpoint = false;
  bool has_vertices = false;
  bool has_length = false;
  double n1 = 0, n2 = 0, vertices = 0;
  double tol1 = 0, tol2 = 0, tol3 = 0;
  double length_lo = 0, length_hi = 0;
  std::int64_t max_shell = -1;  // -1: sampler default
};

Window make_window(const EnsembleParams& params, const Constraint& c, const ConditionedOptions& o) {
  if (!(o.window >= 0.0)) throw DomainError("window must be nonnegative");
  if (o.max_attempts < 1) throw DomainError("max_attempts must be positive");
  Window w;
  if (c.endpoint || c.vertices) {
    if (c.endpoint && (c.endpoint->x < 0 || c.endpoint->y < 0)) {
      throw DomainError("endpoint constraint must be nonnegative");
    }
    if (c.vertices && *c.vertices < 0) throw DomainError("vertex constraint must be nonnegative");
  }
  CovarianceReport cov;
  if (o.window > 0.0 && (c.endpoint || c.vertices)) cov = covariance(params);
  if (c.endpoint) {
    w.has_endpoint = true;
    w.n1 = static_cast<double>(c.endpoint->x);
    w.n2 = static_cast<double>(c.endpoint->y);
    w.tol1 = o.window * std::sqrt(cov.matrix[0][0]);
    w.tol2 = o.window * std::sqrt(cov.matrix[1][1]);
    // every active direction of shell m adds at least m to X1 + X2
    w.max_shell = static_cast<std::int64_t>(std::floor(w.n1 + w.tol1) + std::floor(w.n2 + w.tol2));
  }
  if (c.vertices) {
    w.has_vertices = true;
    w.vertices = static_cast<double>(*c.vertices);
    w.tol3 = o.window * std::sqrt(cov.matrix[2][2]);
  }
  if (c.length) {
    const auto [lo, hi] = *c.length;
    if (!(lo >= 0.0 && hi > lo)) throw DomainError("length constraint needs 0 <= lo < hi");
    w.has_length = true;
    w.length_lo = lo;
    w.length_hi = hi;
    // |x| >= (x1 + x2)/sqrt(2)
    const auto m = static_cast<std::int64_t>(std::floor(std::sqrt(2.0) * hi));
    w.max_shell = w.max_shell < 0 ? m : std::min(w.max_shell, m);
  }
  return w;
}

struct Attempt {
  double x1 = 0, x2 = 0, vertices = 0, length = 0;
  bool complete = false;
};

// One draw with early rejection; fills `sides` with the active directions.
Attempt attempt_once(const ProductSampler& sampler, const Window& w, Rng& rng,
                     std::vector<std::pair<Direction, std::int64_t>>& sides) {
  sides.clear();
  Attempt a;
  const double x1_max = w.has_endpoint ? w.n1 + w.tol1 : std::numeric_limits<double>::infinity();
  const double x2_max = w.has_endpoint ? w.n2 + w.tol2 : std::numeric_limits<double>::infinity();
  const double n_max = w.has_vertices ? w.vertices + w.tol3 : std::numeric_limits<double>::infinity();
  const double len_max = w.has_length ? w.length_hi : std::numeric_limits<double>::infinity();
  a.complete = sampler.visit(rng, [&](Direction x, std::int64_t k) {
    const double kd = static_cast<double>(k);
    a.x1 += kd * static_cast<double>(x.x1);
    a.x2 += kd * static_cast<double>(x.x2);
    a.vertices += 1.0;
    a.length += kd * std::hypot(static_cast<double>(x.x1), static_cast<double>(x.x2));
    sides.emplace_back(x, k);
    return a.x1 <= x1_max && a.x2 <= x2_max && a.vertices <= n_max && a.length < len_max;
  });
  return a;
}

bool accepted(const Window& w, const Attempt& a) {
  if (!a.complete) return false;
  if (w.has_endpoint && (std::fabs(a.x1 - w.n1) > w.tol1 || std::fabs(a.x2 - w.n2) > w.tol2)) return false;
  if (w.has_vertices && std::fabs(a.vertices - w.vertices) > w.tol3) return false;
  if (w.has_length && !(a.length >= w.length_lo && a.length < w.length_hi)) return false;
  return true;
}

double miss_distance(const Window& w, const Attempt& a) {
  double d = 0.0;
  if (w.has_endpoint) d = std::max({d, std::fabs(a.x1 - w.n1), std::fabs(a.x2 - w.n2)});
  if (w.has_vertices) d = std::max(d, std::fabs(a.vertices - w.vertices));
  if (w.has_length) {
    d = std::max(d, a.length < w.length_lo ? w.length_lo - a.length
                    : a.length >= w.length_hi ? a.length - w.length_hi
                                              : 0.0);
  }
  return d;
}

ConditionedSample conditioned_with(const ProductSampler& sampler, const Window& w,
                                   const ConditionedOptions& o, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<Direction, std::int64_t>> sides;
  double nearest = std::numeric_limits<double>::infinity();
  for (std::int64_t attempt = 1; attempt <= o.max_attempts; ++attempt) {
    const Attempt a = attempt_once(sampler, w, rng, sides);
    if (accepted(w, a)) {
      ConditionedSample s;
      for (const auto& [x, k] : sides) s.nu.set(x, k);
      s.chain = decode(s.nu);
      s.attempts = attempt;
      s.offsets = {a.x1 - w.n1, a.x2 - w.n2, a.vertices - w.vertices};
      if (!w.has_endpoint) s.offsets[0] = s.offsets[1] = 0.0;
      if (!w.has_vertices) s.offsets[2] = 0.0;
      return s;
    }
    if (a.complete) nearest = std::min(nearest, miss_distance(w, a));
  }
  std::string what = "conditioned sampler exhausted " + std::to_string(o.max_attempts) + " attempts";
  if (std::isinf(nearest)) what += "; every attempt overshot the target";
  throw ConditioningFailure(what, o.max_attempts, nearest);
}

ProductSampler sampler_for(const EnsembleParams& params, const Window& w) {
  return w.max_shell >= 0 ? ProductSampler(params, w.max_shell) : ProductSampler(params);
}

std::vector<ConditionedSample> many_impl(const EnsembleParams& params, const Constraint& c,
                                         const ConditionedOptions& o, std::int64_t count,
                                         std::uint64_t seed, bool parallel) {
  if (count < 0) throw DomainError("count must be nonnegative");
  const Window w = make_window(params, c, o);
  const ProductSampler sampler = sampler_for(params, w);
  std::vector<ConditionedSample> out(static_cast<std::size_t>(count));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] =
          conditioned_with(sampler, w, o, stream_seed(seed, static_cast<std::uint64_t>(i)));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

constexpr std::int64_t kBlock = 1024;

template <class Hit>
std::int64_t count_hits(std::int64_t replicas, std::uint64_t seed,
                        bool parallel, Hit&& hit) {
  const std::int64_t blocks = (replicas + kBlock - 1) / kBlock;
  std::vector<std::int64_t> per_block(static_cast<std::size_t>(blocks), 0);
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
  for (std::int64_t b = 0; b < blocks; ++b) {
    Rng rng(seed, static_cast<std::uint64_t>(b));
    const std::int64_t end = std::min(replicas, (b + 1) * kBlock);
    std::int64_t h = 0;
    for (std::int64_t r = b * kBlock; r < end; ++r) h += hit(rng) ? 1 : 0;
    per_block[static_cast<std::size_t>(b)] = h;
  }
  std::int64_t total = 0;
  for (std::int64_t h : per_block) total += h;
  return total;
}

CountEstimate estimate_impl(std::int64_t n1, std::int64_t n2, std::int64_t vertices,
                            const EnsembleParams& params, std::int64_t replicas, std::uint64_t seed,
                            bool parallel) {
  if (params.kind != EnsembleKind::endpoint) throw DomainError("estimate_count needs endpoint parameters");
  params.validate();
  if (n1 < 0 || n2 < 0 || vertices < 0) throw DomainError("estimate_count: negative target");
  if (replicas < 1000) throw DomainError("estimate_count needs at least 1000 replicas");
  if ((n1 > 0 && params.z1 <= 0.0) || (n2 > 0 && params.z2 <= 0.0) || params.lambda <= 0.0) {
    throw DomainError("estimate_count: target unreachable with a zero weight");
  }
  // Shells above n1 + n2 must be empty on the event; their emptiness
  // probability is folded into the prefactor exactly.
  const std::int64_t max_shell = n1 + n2;
  const ProductSampler sampler(params, max_shell);
  const std::int64_t hits = count_hits(replicas, seed, parallel, [&](Rng& rng) {
    std::int64_t a = 0, b = 0, N = 0;
    const bool done = sampler.visit(rng, [&](Direction x, std::int64_t k) {
      a += k * x.x1;
      b += k * x.x2;
      ++N;
      return a <= n1 && b <= n2 && N <= vertices;
    });
    return done && a == n1 && b == n2 && N == vertices;
  });
  CountEstimate e;
  e.hits = hits;
  e.replicas = replicas;
  e.log_prefactor = log_prefactor_shells(params, max_shell) - static_cast<double>(vertices) * std::log(params.lambda);
  if (n1 > 0) e.log_prefactor -= static_cast<double>(n1) * std::log(params.z1);
  if (n2 > 0) e.log_prefactor -= static_cast<double>(n2) * std::log(params.z2);
  const double f = std::exp(e.log_prefactor);
  const double R = static_cast<double>(replicas);
  const double p = static_cast<double>(hits) / R;
  e.estimate = f * p;
  e.standard_error = f * std::sqrt(p * (1.0 - p) / R);
  e.zero_hits = hits == 0;
  e.upper_bound_95 = e.zero_hits ? f * -std::expm1(std::log(0.05) / R) : e.estimate + 1.6448536269514722 * e.standard_error;
  return e;
}

}  // namespace

ConditionedSample sample_conditioned(const EnsembleParams& params, const Constraint& constraint,
                                     const ConditionedOptions& options, std::uint64_t seed) {
  const Window w = make_window(params, constraint, options);
  return conditioned_with(sampler_for(params, w), w, options, seed);
}

std::vector<ConditionedSample> sample_conditioned_many(const EnsembleParams& params,
                                                       const Constraint& constraint,
                                                       const ConditionedOptions& options,
                                                       std::int64_t count, std::uint64_t seed) {
  return many_impl(params, constraint, options, count, seed, true);
}

std::vector<ConditionedSample> sample_conditioned_many_serial(const EnsembleParams& params,
                                                              const Constraint& constraint,
                                                              const ConditionedOptions& options,
                                                              std::int64_t count,
                                                              std::uint64_t seed) {
  return many_impl(params, constraint, options, count, seed, false);
}

CountEstimate estimate_count(std::int64_t n1, std::int64_t n2, std::int64_t vertices,
                             const EnsembleParams& params, std::int64_t replicas,
                             std::uint64_t seed) {
  return estimate_impl(n1, n2, vertices, params, replicas, seed, true);
}

CountEstimate estimate_count_serial(std::int64_t n1, std::int64_t n2, std::int64_t vertices,
                                    const EnsembleParams& params, std::int64_t replicas,
                                    std::uint64_t seed) {
  return estimate_impl(n1, n2, vertices, params, replicas, seed, false);
}

LengthCountEstimate estimate_length_count(std::int64_t n, std::int64_t vertices,
                                          const EnsembleParams& params, std::int64_t replicas,
                                          std::uint64_t seed) {
  if (params.kind != EnsembleKind::length) throw DomainError("estimate_length_count needs length parameters");
  params.validate();
  if (n < 0 || vertices < 0) throw DomainError("estimate_length_count: negative target");
  if (replicas < 1000) throw DomainError("estimate_length_count needs at least 1000 replicas");
  const double hi = static_cast<double>(n + 1);
  const auto max_shell = static_cast<std::int64_t>(std::floor(std::sqrt(2.0) * hi));
  const ProductSampler sampler(params, max_shell);
  const std::int64_t hits = count_hits(replicas, seed, true, [&](Rng& rng) {
    double len = 0.0;
    std::int64_t N = 0;
    const bool done = sampler.visit(rng, [&](Direction x, std::int64_t k) {
      len += static_cast<double>(k) * std::hypot(static_cast<double>(x.x1), static_cast<double>(x.x2));
      ++N;
      return len < hi && N <= vertices;
    });
    return done && N == vertices && len >= static_cast<double>(n) && len < hi;
  });
  LengthCountEstimate e;
  e.hits = hits;
  e.replicas = replicas;
  e.zero_hits = hits == 0;
  const double log_f = log_prefactor_shells(params, max_shell) -
                       static_cast<double>(n) * std::log(params.z) -
                       static_cast<double>(vertices) * std::log(params.lambda);
  const double p = static_cast<double>(hits) / static_cast<double>(replicas);
  e.low = std::exp(log_f) * p;
  e.high = e.low / params.z;
  e.relative_standard_error =
      hits > 0 ? std::sqrt((1.0 - p) / (p * static_cast<double>(replicas))) : 0.0;
  return e;
}

}  // namespace convexchains
