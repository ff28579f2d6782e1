#include "cli.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "convexchains/analytic.hpp"
#include "convexchains/chain.hpp"
#include "convexchains/ensemble.hpp"
#include "convexchains/errors.hpp"
#include "convexchains/exactcount.hpp"
#include "convexchains/parallel.hpp"
#include "convexchains/randommodel.hpp"
#include "convexchains/shapes.hpp"

#ifndef CONVEXCHAINS_VERSION
#define CONVEXCHAINS_VERSION "0.0.0"
#endif

namespace convexchains::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string num(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::string g17(double v) { return num("%.17g", v); }

// Options shared by every subcommand (CLI11 fallthrough lets them follow
// the subcommand name).
struct Common {
  bool json = false;
  bool csv = false;
  std::string out_path;
  std::string manifest_path;
  int threads = 0;
};

// Ensemble parameters, given explicitly or through a calibration target.
struct ParamFlags {
  std::string kind = "endpoint";
  std::optional<double> z, z1, z2, y, lambda, tolerance;
  std::optional<std::int64_t> n;
  std::optional<double> c, s, L;
  bool refine = false;
};

void add_param_flags(CLI::App* sub, ParamFlags& f, bool calibration) {
  sub->add_option("--kind", f.kind, "Ensemble: endpoint, length or mixed")
      ->check(CLI::IsMember({"endpoint", "length", "mixed"}));
  sub->add_option("--z", f.z, "Decay parameter (length/mixed z, or z1 = z2 for endpoint)");
  sub->add_option("--z1", f.z1, "Endpoint decay in the first coordinate");
  sub->add_option("--z2", f.z2, "Endpoint decay in the second coordinate");
  sub->add_option("--y", f.y, "Mixed-kind weight on x1 + x2");
  sub->add_option("--lambda", f.lambda, "Vertex penalty");
  sub->add_option("--tolerance", f.tolerance, "Truncation tolerance (default 1e-12)");
  if (calibration) {
    sub->add_option("--n", f.n, "Calibrate to chains ending near (n, n) (or of length n)");
    sub->add_option("--c", f.c, "Vertex constant: E N = c n^(2/3), or c n^s with --s");
    sub->add_option("--s", f.s, "Few-vertices exponent, 0 < s < 2/3");
    sub->add_option("--L", f.L, "Mixed kind: length ratio, sqrt(2) < L < 2");
    sub->add_flag("--refine", f.refine, "Solve the exact moment equations at finite n");
  }
}

CalibrationTarget target_from(const ParamFlags& f) {
  if (f.kind == "mixed") {
    if (!f.L) throw UsageError("--kind mixed calibration needs --L");
    return MixedLength{*f.L};
  }
  if (f.kind == "length") {
    if (f.c) return LengthVertexConstant{*f.c};
    return LengthPenalty{f.lambda.value_or(1.0)};
  }
  if (f.s) return FewVertices{*f.s, f.c.value_or(1.0)};
  if (f.c) return EndpointVertexConstant{*f.c};
  return EndpointPenalty{f.lambda.value_or(1.0)};
}

struct ResolvedParams {
  EnsembleParams params;
  std::optional<Calibration> calibration;
};

ResolvedParams params_from(const ParamFlags& f) {
  ResolvedParams r;
  if (f.n) {
    Calibration cal = calibrate(*f.n, target_from(f), RefineOptions{f.refine});
    if (f.tolerance) cal.params.truncation_tolerance = *f.tolerance;
    r.params = cal.params;
    r.calibration = cal;
    return r;
  }
  if (f.kind == "endpoint") {
    const std::optional<double> a = f.z1 ? f.z1 : f.z, b = f.z2 ? f.z2 : f.z;
    if (!a || !b) throw UsageError("endpoint parameters need --z or --z1/--z2 (or --n to calibrate)");
    r.params = EnsembleParams::endpoint(*a, *b, f.lambda.value_or(1.0));
  } else if (f.kind == "length") {
    if (!f.z) throw UsageError("length parameters need --z (or --n to calibrate)");
    r.params = EnsembleParams::length(*f.z, f.lambda.value_or(1.0));
  } else {
    if (!f.z || !f.y) throw UsageError("mixed parameters need --y and --z (or --n with --L)");
    r.params = EnsembleParams::mixed(*f.y, *f.z);
  }
  if (f.tolerance) {
    r.params.truncation_tolerance = *f.tolerance;
    r.params.validate();
  }
  return r;
}

json params_json(const EnsembleParams& p) {
  json j{{"kind", to_string(p.kind)}, {"truncation_tolerance", p.truncation_tolerance}};
  switch (p.kind) {
    case EnsembleKind::endpoint:
      j["z1"] = p.z1;
      j["z2"] = p.z2;
      j["lambda"] = p.lambda;
      break;
    case EnsembleKind::length:
      j["z"] = p.z;
      j["lambda"] = p.lambda;
      break;
    case EnsembleKind::mixed:
      j["y"] = p.y;
      j["z"] = p.z;
      break;
  }
  return j;
}

const char* branch_name(FamilyBranch b) {
  switch (b) {
    case FamilyBranch::alpha:
      return "alpha";
    case FamilyBranch::beta:
      return "beta";
    case FamilyBranch::circle:
      break;
  }
  return "circle";
}

json moments_json(const MomentReport& m) {
  return {{"expected_endpoint", {m.expected_endpoint[0], m.expected_endpoint[1]}},
          {"expected_vertices", m.expected_vertices},
          {"expected_length", m.expected_length},
          {"truncation_bound", m.truncation_bound},
          {"max_shell", m.max_shell}};
}

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json calibration_json(std::int64_t n, const Calibration& cal) {
  json j{{"n", n},
         {"params", params_json(cal.params)},
         {"targets",
          {{"endpoint", nullable(cal.target_endpoint)},
           {"vertices", nullable(cal.target_vertices)},
           {"length", nullable(cal.target_length)}}},
         {"iterations", cal.iterations}};
  if (cal.family) j["family"] = {{"branch", branch_name(cal.family->branch)}, {"parameter", cal.family->value}};
  return j;
}

// Flattens a JSON object into "key,value" CSV rows.
void flatten(const json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, os);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), os);
  } else if (j.is_number_float()) {
    os << prefix << ',' << g17(j.get<double>()) << '\n';
  } else if (j.is_string()) {
    os << prefix << ',' << j.get<std::string>() << '\n';
  } else {
    os << prefix << ',' << j.dump() << '\n';
  }
}

std::vector<double> sweep_grid(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      parts.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError("--sweep expects from,to,points");
    }
  }
  if (parts.size() != 3) throw UsageError("--sweep expects from,to,points");
  const double from = parts[0], to = parts[1];
  const auto points = static_cast<std::int64_t>(parts[2]);
  if (!(from > 0.0 && to > 0.0) || points < 1 || static_cast<double>(points) != parts[2]) {
    throw DomainError("--sweep needs positive from, to and an integer point count >= 1");
  }
  std::vector<double> grid;
  for (std::int64_t i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
    grid.push_back(std::exp(std::log(from) + t * (std::log(to) - std::log(from))));
  }
  grid.front() = from;
  if (points > 1) grid.back() = to;
  return grid;
}

const char* kFormatsHelp = R"(Output formats:
  CSV (default) uses '.' decimals without locale dependence. Tables have a
  header row; single records are written as "key,value" rows.
  --json writes one JSON document. Big integers are decimal strings.
  Chains are written as "x,y" vertex rows (CSV) or [[x,y],...] (JSON);
  vertex maps as {"x1,x2": multiplicity}.
  --manifest FILE appends one JSON line per run with the command, argv,
  parameters, seed, version, thread count and wall time.
Exit codes: 0 ok, 2 domain error, 3 budget or convergence failure, 64 usage.
Environment: CONVEXCHAINS_THREADS sets the default OpenMP thread count.)";

struct Runner {
  Common common;
  json details = json::object();  // extra manifest fields
  std::optional<std::uint64_t> seed;
  std::ostringstream body;

  bool as_json() const { return common.json; }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  CLI::App app{"Convex lattice chains: exact counts, ensembles, constants and limit shapes",
               "convexchains"};
  app.footer(kFormatsHelp);
  app.require_subcommand(1);
  app.fallthrough();
  Runner r;
  app.add_flag("--json", r.common.json, "Write JSON");
  app.add_flag("--csv", r.common.csv, "Write CSV (default)");
  app.add_option("--out", r.common.out_path, "Write results to this file instead of stdout");
  app.add_option("--manifest", r.common.manifest_path, "Append a JSON run record to this file");
  app.add_option("--threads", r.common.threads, "OpenMP threads (default: CONVEXCHAINS_THREADS)");

  std::function<void()> action;
  std::ostream& os = r.body;

  // ---- count-exact
  auto* ce = app.add_subcommand("count-exact", "Exact counts N(n1, n2, N) by dynamic programming");
  std::int64_t ce_n1 = 0, ce_n2 = 0, ce_budget = 60;
  ce->add_option("--n1", ce_n1, "First endpoint coordinate")->required();
  ce->add_option("--n2", ce_n2, "Second endpoint coordinate")->required();
  ce->add_option("--budget", ce_budget, "Maximum n1 + n2");
  ce->callback([&] {
    action = [&] {
      const CountTable t = count_exact(ce_n1, ce_n2, CountOptions{ce_budget});
      if (r.as_json()) {
        json counts = json::object();
        for (std::size_t N = 0; N < t.counts.size(); ++N) {
          if (t.counts[N] != 0) counts[std::to_string(N)] = t.counts[N].get_str();
        }
        os << json{{"n1", t.n1}, {"n2", t.n2}, {"counts", counts}, {"total", t.total().get_str()}}.dump()
           << '\n';
      } else {
        os << "N,count\n";
        for (std::size_t N = 0; N < t.counts.size(); ++N) os << N << ',' << t.counts[N].get_str() << '\n';
      }
    };
  });

  // ---- count-estimate
  auto* est = app.add_subcommand("count-estimate", "Monte Carlo count from the product measure");
  ParamFlags est_p;
  add_param_flags(est, est_p, false);
  std::optional<std::int64_t> est_n1, est_n2, est_len;
  std::int64_t est_vertices = 0, est_replicas = 100000;
  std::uint64_t est_seed = 1;
  bool est_auto = false;
  est->add_option("--n1", est_n1, "Endpoint first coordinate (endpoint kind)");
  est->add_option("--n2", est_n2, "Endpoint second coordinate (endpoint kind)");
  est->add_option("--length", est_len, "Length window [n, n+1) (length kind)");
  est->add_option("--vertices", est_vertices, "Vertex count N")->required();
  est->add_option("--replicas", est_replicas, "Replicas (>= 1000)");
  est->add_option("--seed", est_seed, "Master seed");
  est->add_flag("--auto", est_auto, "Choose parameters by matching the moments to the target");
  est->callback([&] {
    action = [&] {
      r.seed = est_seed;
      if (est_len) {
        ParamFlags f = est_p;
        f.kind = "length";
        const EnsembleParams p = params_from(f).params;
        const LengthCountEstimate e = estimate_length_count(*est_len, est_vertices, p, est_replicas, est_seed);
        const json j{{"length", *est_len},     {"vertices", est_vertices},
                     {"low", e.low},           {"high", e.high},
                     {"relative_standard_error", e.relative_standard_error},
                     {"hits", e.hits},         {"replicas", e.replicas},
                     {"zero_hits", e.zero_hits}, {"params", params_json(p)}};
        r.details["params"] = j["params"];
        if (r.as_json()) os << j.dump() << '\n';
        else flatten(j, "", os);
        return;
      }
      if (!est_n1 || !est_n2) throw UsageError("count-estimate needs --n1 and --n2 (or --length)");
      EnsembleParams p;
      if (est_auto) {
        const double n1 = static_cast<double>(*est_n1), n2 = static_cast<double>(*est_n2);
        const double zs = 1.0 - growth_constants(1.0).delta / std::cbrt(std::max(1.0, 0.5 * (n1 + n2)));
        MomentTargets mt;
        mt.x1 = n1;
        mt.x2 = n2;
        if (est_vertices > 0) mt.vertices = static_cast<double>(est_vertices);
        p = refine(EnsembleParams::endpoint(zs, zs, 1.0), mt, RefineOptions{true});
      } else {
        p = params_from(est_p).params;
      }
      const CountEstimate e = estimate_count(*est_n1, *est_n2, est_vertices, p, est_replicas, est_seed);
      const json j{{"n1", *est_n1},
                   {"n2", *est_n2},
                   {"vertices", est_vertices},
                   {"estimate", e.estimate},
                   {"standard_error", e.standard_error},
                   {"hits", e.hits},
                   {"replicas", e.replicas},
                   {"zero_hits", e.zero_hits},
                   {"upper_bound_95", e.upper_bound_95},
                   {"log_prefactor", e.log_prefactor},
                   {"params", params_json(p)}};
      r.details["params"] = j["params"];
      if (r.as_json()) os << j.dump() << '\n';
      else flatten(j, "", os);
    };
  });

  // ---- constants / jarnik
  auto* cs = app.add_subcommand("constants", "Growth constants delta, c, e and c_J, e_J against lambda");
  std::optional<double> cs_lambda;
  std::string cs_sweep;
  cs->add_option("--lambda", cs_lambda, "Vertex penalty");
  cs->add_option("--sweep", cs_sweep, "Log-spaced grid from,to,points");
  auto* jk = app.add_subcommand("jarnik", "Length-constrained constants c_J, e_J");
  std::optional<double> jk_lambda;
  std::string jk_sweep;
  jk->add_option("--lambda", jk_lambda, "Vertex penalty");
  jk->add_option("--sweep", jk_sweep, "Log-spaced grid from,to,points");
  auto lambda_grid = [](const std::optional<double>& l, const std::string& sweep) {
    if (!sweep.empty()) return sweep_grid(sweep);
    return std::vector<double>{l.value_or(1.0)};
  };
  cs->callback([&] {
    action = [&] {
      json rows = json::array();
      if (!r.as_json()) os << "lambda,delta,c,e,c_J,e_J\n";
      for (double lambda : lambda_grid(cs_lambda, cs_sweep)) {
        const GrowthConstants g = growth_constants(lambda);
        const JarnikConstants j = jarnik_constants(lambda);
        if (r.as_json()) {
          rows.push_back({{"lambda", lambda}, {"delta", g.delta}, {"c", g.c}, {"e", g.e}, {"c_J", j.c_j}, {"e_J", j.e_j}});
        } else {
          os << num("%.9g", lambda) << ',' << num("%.6f", g.delta) << ',' << num("%.6f", g.c) << ','
             << num("%.6f", g.e) << ',' << num("%.6f", j.c_j) << ',' << num("%.6f", j.e_j) << '\n';
        }
      }
      if (r.as_json()) os << json{{"rows", rows}, {"max_vertices_constant", max_vertices_constant()}}.dump() << '\n';
    };
  });
  jk->callback([&] {
    action = [&] {
      json rows = json::array();
      if (!r.as_json()) os << "lambda,c_J,e_J\n";
      for (double lambda : lambda_grid(jk_lambda, jk_sweep)) {
        const JarnikConstants j = jarnik_constants(lambda);
        if (r.as_json()) {
          rows.push_back({{"lambda", lambda}, {"c_J", j.c_j}, {"e_J", j.e_j}});
        } else {
          os << num("%.9g", lambda) << ',' << num("%.6f", j.c_j) << ',' << num("%.6f", j.e_j) << '\n';
        }
      }
      if (r.as_json()) os << json{{"rows", rows}, {"max_constant", jarnik_max_constant()}}.dump() << '\n';
    };
  });

  // ---- calibrate
  auto* cal = app.add_subcommand("calibrate", "Ensemble parameters for chains of size n");
  ParamFlags cal_p;
  add_param_flags(cal, cal_p, true);
  cal->callback([&] {
    action = [&] {
      if (!cal_p.n) throw UsageError("calibrate needs --n");
      const ResolvedParams rp = params_from(cal_p);
      json j = calibration_json(*cal_p.n, *rp.calibration);
      j["moments"] = moments_json(moments(rp.params));
      r.details["params"] = j["params"];
      if (r.as_json()) os << j.dump() << '\n';
      else flatten(j, "", os);
    };
  });

  // ---- moments
  auto* mo = app.add_subcommand("moments", "Exact truncated moment sums of an ensemble");
  ParamFlags mo_p;
  add_param_flags(mo, mo_p, true);
  bool mo_cov = false;
  mo->add_flag("--covariance", mo_cov, "Also report the covariance of (X1, X2, N)");
  mo->callback([&] {
    action = [&] {
      const ResolvedParams rp = params_from(mo_p);
      json j{{"params", params_json(rp.params)}, {"moments", moments_json(moments(rp.params))}};
      if (mo_cov) {
        const CovarianceReport c = covariance(rp.params);
        j["covariance"] = {{"matrix", c.matrix},
                           {"length_variance", c.length_variance},
                           {"length_vertex_covariance", c.length_vertex_covariance},
                           {"positive_semidefinite", c.positive_semidefinite()},
                           {"truncation_bound", c.truncation_bound}};
      }
      r.details["params"] = j["params"];
      if (r.as_json()) os << j.dump() << '\n';
      else flatten(j, "", os);
    };
  });

  // ---- sample
  auto* sa = app.add_subcommand("sample", "Draw chains from an ensemble, optionally conditioned");
  ParamFlags sa_p;
  add_param_flags(sa, sa_p, true);
  std::optional<std::int64_t> sa_n1, sa_n2, sa_vertices;
  std::optional<double> sa_len_lo, sa_len_hi;
  double sa_window = 0.0;
  std::int64_t sa_attempts = 10'000'000, sa_count = 1;
  std::uint64_t sa_seed = 1;
  sa->add_option("--n1", sa_n1, "Condition on the endpoint first coordinate");
  sa->add_option("--n2", sa_n2, "Condition on the endpoint second coordinate");
  sa->add_option("--vertices", sa_vertices, "Condition on the vertex count");
  sa->add_option("--length-lo", sa_len_lo, "Condition on length >= this");
  sa->add_option("--length-hi", sa_len_hi, "Condition on length < this");
  sa->add_option("--window", sa_window, "Soft window in standard deviations (0 = exact)");
  sa->add_option("--max-attempts", sa_attempts, "Rejection attempts per sample");
  sa->add_option("--count", sa_count, "Number of samples");
  sa->add_option("--seed", sa_seed, "Master seed");
  sa->callback([&] {
    action = [&] {
      r.seed = sa_seed;
      const ResolvedParams rp = params_from(sa_p);
      r.details["params"] = params_json(rp.params);
      Constraint c;
      if (sa_n1 || sa_n2) {
        if (!sa_n1 || !sa_n2) throw UsageError("endpoint conditioning needs both --n1 and --n2");
        c.endpoint = LatticePoint{*sa_n1, *sa_n2};
      }
      c.vertices = sa_vertices;
      if (sa_len_lo || sa_len_hi) {
        if (!sa_len_lo || !sa_len_hi) throw UsageError("length conditioning needs --length-lo and --length-hi");
        c.length = std::array<double, 2>{*sa_len_lo, *sa_len_hi};
      }
      const bool conditioned = c.endpoint || c.vertices || c.length;
      std::vector<ConditionedSample> samples;
      double neglected = 0.0;
      if (conditioned) {
        ConditionedOptions o{sa_window, sa_attempts};
        samples = sample_conditioned_many(rp.params, c, o, sa_count, sa_seed);
      } else {
        const ProductSampler sampler(rp.params);
        neglected = sampler.neglected_mass();
        for (std::int64_t i = 0; i < sa_count; ++i) {
          Rng rng(sa_seed, static_cast<std::uint64_t>(i));
          ConditionedSample s;
          s.nu = sampler.draw(rng);
          s.chain = decode(s.nu);
          s.attempts = 1;
          samples.push_back(std::move(s));
        }
      }
      std::int64_t attempts = 0;
      for (const auto& s : samples) attempts += s.attempts;
      r.details["attempts"] = attempts;
      r.details["window"] = sa_window;
      if (r.as_json()) {
        json arr = json::array();
        for (const auto& s : samples) {
          json pts = json::array();
          for (const auto& v : s.chain.vertices()) pts.push_back({v.x, v.y});
          const ChainStats st = stats(s.nu);
          arr.push_back({{"vertex_map", to_json(s.nu)},
                         {"chain", pts},
                         {"attempts", s.attempts},
                         {"offsets", s.offsets},
                         {"endpoint", {st.endpoint.x, st.endpoint.y}},
                         {"vertex_count", st.vertex_count},
                         {"length", st.euclidean_length}});
        }
        os << json{{"params", params_json(rp.params)}, {"neglected_mass", neglected}, {"samples", arr}}.dump()
           << '\n';
      } else if (sa_count == 1) {
        os << to_csv(samples.front().chain);
      } else {
        os << "sample,x,y\n";
        for (std::size_t i = 0; i < samples.size(); ++i) {
          for (const auto& v : samples[i].chain.vertices()) os << i << ',' << v.x << ',' << v.y << '\n';
        }
      }
    };
  });

  // ---- shape
  auto* sh = app.add_subcommand("shape", "Limit-shape curves as polylines on [0,1]^2");
  std::optional<double> sh_L;
  bool sh_parabola = false, sh_circle = false;
  std::int64_t sh_points = 1001;
  sh->add_option("--L", sh_L, "Family curve of length L, sqrt(2) < L < 2");
  sh->add_flag("--parabola", sh_parabola, "The parabola sqrt(y) = 1 - sqrt(1 - x)");
  sh->add_flag("--circle", sh_circle, "The quarter circle through (0,0) and (1,1)");
  sh->add_option("--points", sh_points, "Grid points");
  sh->callback([&] {
    action = [&] {
      const int chosen = (sh_L ? 1 : 0) + (sh_parabola ? 1 : 0) + (sh_circle ? 1 : 0);
      if (chosen != 1) throw UsageError("shape needs exactly one of --L, --parabola, --circle");
      const CurveSpec c = sh_L ? family_curve(*sh_L, sh_points) : sh_parabola ? parabola(sh_points) : circle_arc(sh_points);
      const char* kind = c.kind == CurveKind::parabola       ? "parabola"
                         : c.kind == CurveKind::circle       ? "circle"
                         : c.kind == CurveKind::family_alpha ? "family_alpha"
                                                             : "family_beta";
      if (r.as_json()) {
        json pts = json::array();
        for (const auto& p : c.points) pts.push_back({p.x, p.y});
        os << json{{"kind", kind}, {"parameter", c.parameter}, {"nominal_length", c.nominal_length}, {"points", pts}}.dump()
           << '\n';
      } else {
        os << "x,y\n";
        for (const auto& p : c.points) os << g17(p.x) << ',' << g17(p.y) << '\n';
      }
    };
  });

  // ---- random-model
  auto* rm = app.add_subcommand("random-model", "Convex position of k uniform points with the corners");
  int rm_k = 1;
  std::int64_t rm_trials = 1'000'000;
  std::uint64_t rm_seed = 1;
  std::optional<std::int64_t> rm_n;
  rm->add_option("--k", rm_k, "Number of points")->required();
  rm->add_option("--trials", rm_trials, "Monte Carlo trials");
  rm->add_option("--seed", rm_seed, "Master seed");
  rm->add_option("--n", rm_n, "Also report the expected chain count among n^2 points");
  rm->callback([&] {
    action = [&] {
      r.seed = rm_seed;
      const ProbabilityEstimate e = convex_probability_mc(rm_k, rm_trials, rm_seed);
      json j{{"k", rm_k},
             {"trials", e.trials},
             {"hits", e.hits},
             {"estimate", e.estimate},
             {"standard_error", e.standard_error},
             {"target", e.target},
             {"target_exact", convex_probability_exact(rm_k).get_str()}};
      if (rm_n) {
        const RandomExpectedChains x = random_expected_chains(*rm_n, rm_k);
        j["expected_chains"] = {{"n", *rm_n}, {"exact", x.exact.get_str()}, {"log", x.log_exact}};
      }
      if (r.as_json()) os << j.dump() << '\n';
      else flatten(j, "", os);
    };
  });

  // ---- dbound
  auto* db = app.add_subcommand("dbound", "Upper bound d on the random-model longest chain constant");
  db->callback([&] {
    action = [&] {
      const double d = random_max_bound();
      if (r.as_json()) {
        os << json{{"d", d}, {"renyi_sulanke_constant", renyi_sulanke_constant()}}.dump() << '\n';
      } else {
        os << num("%.3f", d) << '\n';
      }
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kExitUsage;
  }

  if (r.common.json && r.common.csv) {
    err << "error: --json and --csv are exclusive\n";
    return kExitUsage;
  }
  if (r.common.threads > 0) {
    omp_set_num_threads(r.common.threads);
  } else {
    configure_threads();
  }

  try {
    action();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const ConditioningFailure& e) {
    err << "resource error: " << e.what() << " (attempts " << e.attempts() << ", nearest miss "
        << e.nearest_miss() << ")\n";
    return kExitResource;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << '\n';
    return kExitResource;
  } catch (const ConvergenceError& e) {
    err << "convergence error: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  if (r.common.out_path.empty()) {
    out << r.body.str();
  } else {
    std::ofstream f(r.common.out_path, std::ios::binary);
    if (!f) {
      err << "error: cannot open " << r.common.out_path << '\n';
      return kExitResource;
    }
    f << r.body.str();
  }

  if (!r.common.manifest_path.empty()) {
    const CLI::App* sub = app.get_subcommands().front();
    json params = json::object();
    for (const CLI::Option* opt : sub->get_options()) {
      if (opt->count() == 0 || opt->get_name() == "--help") continue;
      const auto& res = opt->results();
      params[opt->get_name()] = res.size() == 1 ? json(res.front()) : json(res);
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json m{{"command", sub->get_name()},
           {"argv", args},
           {"parameters", params},
           {"seed", r.seed ? json(*r.seed) : json(nullptr)},
           {"version", CONVEXCHAINS_VERSION},
           {"threads", omp_get_max_threads()},
           {"wall_time_seconds", wall}};
    for (const auto& [k, v] : r.details.items()) m[k] = v;
    std::ofstream f(r.common.manifest_path, std::ios::app);
    if (!f) {
      err << "error: cannot open manifest " << r.common.manifest_path << '\n';
      return kExitResource;
    }
    f << m.dump() << '\n';
  }
  return kExitOk;
}

}  // namespace convexchains::cli
