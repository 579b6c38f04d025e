#include "symflow/verify.hpp"

#include "symflow/fixedpoint.hpp"
#include "symflow/flow.hpp"
#include "symflow/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace symflow::verify {

namespace {

// Substream tags keep the independent sampling families of one run from
// overlapping; they are part of the pinned reproducibility scheme.
constexpr std::uint64_t kTagSamples = 0x0000000000000000ULL;
constexpr std::uint64_t kTagAgreement = 0x1000000000000000ULL;
constexpr std::uint64_t kTagSimplex = 0x2000000000000000ULL;
constexpr std::uint64_t kTagAboveOne = 0x3000000000000000ULL;
constexpr std::uint64_t kTagBelowOne = 0x4000000000000000ULL;
constexpr std::uint64_t kTagTail = 0x5000000000000000ULL;
constexpr std::uint64_t kTagClassify = 0x6000000000000000ULL;
constexpr std::uint64_t kTagStarts = 0x7000000000000000ULL;
constexpr std::uint64_t kTagSmallCase = 0x8000000000000000ULL;

struct BestTracker {
  double min_value = std::numeric_limits<double>::infinity();
  long long min_index = -1;
  std::vector<double> min_point;
  long long violations = 0;
  long long count = 0;

  void consider(double value, long long index, const std::vector<double>& point, double tol) {
    ++count;
    if (value < -tol) ++violations;
    if (value < min_value || (value == min_value && index < min_index) || min_index < 0) {
      min_value = value;
      min_index = index;
      min_point = point;
    }
  }

  // Merge order does not matter: (value, index) is totally ordered.
  void merge(const BestTracker& other) {
    violations += other.violations;
    count += other.count;
    if (other.min_index < 0) return;
    if (min_index < 0 || other.min_value < min_value ||
        (other.min_value == min_value && other.min_index < min_index)) {
      min_value = other.min_value;
      min_index = other.min_index;
      min_point = other.min_point;
    }
  }
};

/// Runs fn(i) for i in [0, count) across workers; fn must touch only its own
/// tracker. Trackers merge deterministically afterwards.
BestTracker parallel_track(long long count, double tol,
                           const std::function<std::pair<double, std::vector<double>>(long long)>& fn,
                           long long index_offset) {
  const int workers =
      static_cast<int>(std::max<long long>(1, std::min<long long>(worker_count(), count)));
  std::vector<BestTracker> local(workers);
  const long long chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const long long lo = w * chunk;
      const long long hi = std::min(count, lo + chunk);
      for (long long i = lo; i < hi; ++i) {
        auto [value, point] = fn(i);
        local[w].consider(value, index_offset + i, point, tol);
      }
    });
  }
  for (auto& t : pool) t.join();
  BestTracker total;
  for (const auto& lt : local) total.merge(lt);
  return total;
}

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::ordered_json config_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["n"] = cfg.n;
  j["mode"] = mode_name(cfg.mode);
  j["samples"] = cfg.samples;
  j["seed"] = cfg.seed;
  j["tolerance"] = cfg.tolerance;
  j["box"] = effective_box(cfg);
  j["format"] = format_name(cfg.format);
  j["exact"] = cfg.exact;
  return j;
}

}  // namespace

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::sample: return "sample";
    case Mode::grid: return "grid";
    case Mode::minimize: return "minimize";
    case Mode::flow: return "flow";
    case Mode::lemmas: return "lemmas";
    case Mode::tables: return "tables";
    case Mode::eval: return "eval";
  }
  return "unknown";
}

const char* format_name(Format f) { return f == Format::json ? "json" : "csv"; }

double effective_box(const RunConfig& cfg) {
  return cfg.box > 0.0 ? cfg.box : 6.0 * static_cast<double>(cfg.n);
}

int worker_count() {
  if (const char* env = std::getenv("SYMFLOW_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 256)
      throw std::invalid_argument("SYMFLOW_THREADS must be an integer in [1, 256]");
    return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hw, 1u, 8u));
}

std::vector<std::vector<double>> probe_points(int n, double box) {
  std::vector<std::vector<double>> probes;
  probes.emplace_back(n, 0.0);
  probes.emplace_back(n, 1.0);
  probes.emplace_back(n, 6.0);  // simplex center: sum = 6n
  const double corner = 6.0 * n;
  for (int i = 0; i < n; ++i) {
    std::vector<double> axis(n, 0.0);
    axis[i] = 1.0;
    probes.push_back(axis);
    axis[i] = corner;
    probes.push_back(std::move(axis));
  }
  if (n == 2) {
    for (double t : {0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) probes.push_back({t, 1.0 / t});
  }
  // Drop probes outside the requested box only if the caller shrank it below
  // the compact region; the default box keeps everything.
  if (box < corner) {
    std::erase_if(probes, [box](const std::vector<double>& p) {
      return std::any_of(p.begin(), p.end(), [box](double v) { return v > box; });
    });
  }
  return probes;
}

double evaluator_agreement(int n, long long points, std::uint64_t seed, double box) {
  double worst = 0.0;
  for (long long i = 0; i < points; ++i) {
    rng::SplitMix64 g = rng::substream(seed, kTagAgreement + static_cast<std::uint64_t>(i));
    const std::vector<double> x = rng::uniform_point(g, n, 0.0, box);
    const fixedpoint::MeasureEval ev = fixedpoint::evaluate(x);
    const double scale = std::max(1.0, std::abs(ev.lhs_formula));
    if (ev.lhs_enum) worst = std::max(worst, std::abs(*ev.lhs_enum - ev.lhs_formula) / scale);
    if (ev.lhs_permanent)
      worst = std::max(worst, std::abs(*ev.lhs_permanent - ev.lhs_formula) / scale);
  }
  return worst;
}

VerifyReport run_sampling(const RunConfig& cfg) {
  require(cfg.n >= 2, "run_sampling: needs n >= 2");
  require(cfg.tolerance > 0.0, "run_sampling: tolerance must be positive");
  const double box = effective_box(cfg);
  VerifyReport rep;
  rep.config = cfg;

  BestTracker tracker;
  const auto probes = probe_points(cfg.n, box);
  for (std::size_t i = 0; i < probes.size(); ++i) {
    tracker.consider(fixedpoint::gap(probes[i]), static_cast<long long>(i), probes[i],
                     cfg.tolerance);
  }

  const long long offset = static_cast<long long>(probes.size());
  BestTracker sampled = parallel_track(
      cfg.samples, cfg.tolerance,
      [&](long long i) {
        rng::SplitMix64 g = rng::substream(cfg.seed, kTagSamples + static_cast<std::uint64_t>(i));
        std::vector<double> x = rng::uniform_point(g, cfg.n, 0.0, box);
        const double f = fixedpoint::gap(x);
        return std::make_pair(f, std::move(x));
      },
      offset);
  tracker.merge(sampled);

  rep.samples_run = tracker.count;
  rep.min_gap = tracker.min_value;
  rep.argmin = tracker.min_point;
  rep.violations = tracker.violations;
  if (cfg.n <= 12) {
    rep.evaluator_max_disagreement =
        evaluator_agreement(cfg.n, std::min<long long>(16, cfg.samples), cfg.seed, box);
  }
  rep.pass = rep.violations == 0;
  return rep;
}

VerifyReport run_grid(const RunConfig& cfg) {
  require(cfg.n >= 2 && cfg.n <= 20, "run_grid: needs 2 <= n <= 20");
  require(cfg.tolerance > 0.0, "run_grid: tolerance must be positive");
  const double box = effective_box(cfg);
  VerifyReport rep;
  rep.config = cfg;

  BestTracker tracker;
  const auto probes = probe_points(cfg.n, box);
  for (std::size_t i = 0; i < probes.size(); ++i) {
    tracker.consider(fixedpoint::gap(probes[i]), static_cast<long long>(i), probes[i],
                     cfg.tolerance);
  }

  const long long per_axis = std::max<long long>(
      2, static_cast<long long>(std::floor(std::pow(static_cast<double>(cfg.samples),
                                                    1.0 / cfg.n))));
  long long total = 1;
  for (int i = 0; i < cfg.n; ++i) total *= per_axis;

  const long long offset = static_cast<long long>(probes.size());
  BestTracker gridded = parallel_track(
      total, cfg.tolerance,
      [&](long long i) {
        std::vector<double> x(cfg.n);
        long long rem = i;
        for (int d = 0; d < cfg.n; ++d) {
          x[d] = box * static_cast<double>(rem % per_axis) / static_cast<double>(per_axis - 1);
          rem /= per_axis;
        }
        const double f = fixedpoint::gap(x);
        return std::make_pair(f, std::move(x));
      },
      offset);
  tracker.merge(gridded);

  rep.samples_run = tracker.count;
  rep.min_gap = tracker.min_value;
  rep.argmin = tracker.min_point;
  rep.violations = tracker.violations;
  rep.pass = rep.violations == 0;
  return rep;
}

namespace {

struct PgdOutcome {
  std::vector<double> point;
  double value = 0.0;
  bool converged = false;
};

// Projected gradient descent on the non-negative orthant with a strict
// decrease backtracking line search; the projection floor keeps every
// coordinate positive so the gradient stays valid.
PgdOutcome projected_gradient_descent(std::vector<double> x, int max_iters) {
  constexpr double kFloor = 1e-12;
  constexpr double kGradTol = 1e-10;
  double fx = fixedpoint::gap(x);
  double h = 1.0;
  PgdOutcome out;
  for (int iter = 0; iter < max_iters; ++iter) {
    const fixedpoint::Gradient g = fixedpoint::gradient(x);
    double gmax = 0.0;
    for (double v : g.partials) gmax = std::max(gmax, std::abs(v));
    if (gmax <= kGradTol) {
      out.converged = true;
      break;
    }
    double norm = 0.0;
    for (double v : g.partials) norm += v * v;
    norm = std::sqrt(norm);
    bool accepted = false;
    for (double trial = h; trial >= 1e-12; trial *= 0.5) {
      std::vector<double> cand(x.size());
      for (std::size_t i = 0; i < x.size(); ++i)
        cand[i] = std::max(x[i] - trial * g.partials[i] / norm, kFloor);
      const double fc = fixedpoint::gap(cand);
      if (fc < fx) {
        x = std::move(cand);
        fx = fc;
        h = std::min(trial * 2.0, 10.0);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  out.point = std::move(x);
  out.value = fx;
  return out;
}

}  // namespace

VerifyReport run_minimize(const RunConfig& cfg) {
  require(cfg.n >= 3, "run_minimize: needs n >= 3 (the n = 2 minimizer set is a curve)");
  require(cfg.samples >= 1, "run_minimize: needs at least one start");
  VerifyReport rep;
  rep.config = cfg;

  BestTracker tracker = parallel_track(
      cfg.samples, cfg.tolerance,
      [&](long long i) {
        rng::SplitMix64 g = rng::substream(cfg.seed, kTagStarts + static_cast<std::uint64_t>(i));
        std::vector<double> start = rng::uniform_point(g, cfg.n, 0.1, 6.0);
        PgdOutcome out = projected_gradient_descent(std::move(start), 2000);
        return std::make_pair(out.value, std::move(out.point));
      },
      0);

  rep.samples_run = tracker.count;
  rep.min_gap = tracker.min_value;
  rep.argmin = tracker.min_point;
  rep.violations = tracker.violations;
  double dist = 0.0;
  for (double v : rep.argmin) dist = std::max(dist, std::abs(v - 1.0));
  rep.pass = rep.violations == 0 && std::abs(rep.min_gap) <= 1e-6 && dist <= 1e-4;
  return rep;
}

namespace {

LemmaResult audit_range(int n, long long samples, std::uint64_t seed, std::uint64_t tag, double lo,
                        double hi, bool check_min_partial) {
  LemmaResult res;
  res.samples = samples;
  double worst = check_min_partial ? std::numeric_limits<double>::infinity()
                                   : -std::numeric_limits<double>::infinity();
  for (long long i = 0; i < samples; ++i) {
    rng::SplitMix64 g = rng::substream(seed, tag + static_cast<std::uint64_t>(i));
    const std::vector<double> x = rng::uniform_point(g, n, lo, hi);
    const fixedpoint::Gradient grad = fixedpoint::gradient(x);
    if (check_min_partial) {
      for (double v : grad.partials) worst = std::min(worst, v);
    } else {
      double inner = 0.0;
      for (double v : grad.partials) inner += v;
      worst = std::max(worst, inner);
    }
  }
  res.worst = worst;
  res.pass = check_min_partial ? worst > 0.0 : worst < 0.0;
  return res;
}

// Equal-tail configuration x_1 <= ... <= x_k < x_{k+1} = ... = x_n = T >= 1,
// with a relative gap floor so the strict inequality survives rounding.
std::vector<double> tail_config(rng::SplitMix64& g, int n, int k) {
  const double T = g.uniform(1.0, 6.0);
  std::vector<double> x(n, T);
  const double xk = T * g.uniform(1e-6, 1.0 - 1e-6);
  x[k - 1] = xk;
  for (int i = 0; i < k - 1; ++i) x[i] = g.uniform(0.0, xk);
  std::sort(x.begin(), x.begin() + k);
  return x;
}

}  // namespace

VerifyReport run_lemma_audit(const RunConfig& cfg) {
  if (cfg.n == 2) return check_n2(cfg.samples, cfg.seed, cfg.tolerance);
  if (cfg.n == 3) return check_n3(cfg.samples, cfg.seed, cfg.tolerance);
  require(cfg.n >= 4, "run_lemma_audit: needs n >= 2");
  const int n = cfg.n;
  const long long samples = cfg.samples;
  VerifyReport rep;
  rep.config = cfg;

  {  // gap >= 5/6 on the boundary simplex sum x = 6n
    LemmaResult res;
    res.samples = samples;
    double worst = std::numeric_limits<double>::infinity();
    for (long long i = 0; i < samples; ++i) {
      rng::SplitMix64 g = rng::substream(cfg.seed, kTagSimplex + static_cast<std::uint64_t>(i));
      const std::vector<double> x = rng::simplex_point(g, n, 6.0 * n);
      worst = std::min(worst, fixedpoint::gap(x));
    }
    res.worst = worst;
    res.pass = worst >= 5.0 / 6.0 - 1e-9;
    rep.lemmas["compact_boundary_gap"] = res;
  }

  rep.lemmas["all_above_one_partials"] =
      audit_range(n, samples, cfg.seed, kTagAboveOne, 1.001, 6.0, true);
  rep.lemmas["all_below_one_inner"] =
      audit_range(n, samples, cfg.seed, kTagBelowOne, 1e-4, 0.999, false);

  {  // descent factor and pair derivative on equal-tail configurations
    const int ell = n / 2;
    LemmaResult factor_res, deriv_res, bound_res;
    double worst_factor = std::numeric_limits<double>::infinity();
    double worst_deriv = -std::numeric_limits<double>::infinity();
    double worst_domination = std::numeric_limits<double>::infinity();
    long long total = 0, bound_total = 0;
    for (int k = 1; k <= n - 1; ++k) {
      for (long long i = 0; i < samples; ++i) {
        rng::SplitMix64 g = rng::substream(
            cfg.seed, kTagTail + (static_cast<std::uint64_t>(k) << 40) + static_cast<std::uint64_t>(i));
        const std::vector<double> x = tail_config(g, n, k);
        const flow::SortedPoint sp = flow::SortedPoint::from(x);
        const double sk = flow::descent_factor(sp, k);
        const double ok = flow::pair_derivative(sp, k);
        worst_factor = std::min(worst_factor, sk);
        worst_deriv = std::max(worst_deriv, ok);
        ++total;
        const bool even = n % 2 == 0;
        const int t = even ? ell - k - 1 : ell - k;
        const bool admissible = even ? (t >= 0 && t <= ell - 2) : (t >= 1 && t <= ell - 1);
        if (admissible) {
          const double y = std::sqrt(sp.coords[k - 1] / sp.coords[n - 1]);
          const flow::AuxParams p{n, t, std::min(y, 1.0)};
          const double bound = even ? flow::tail_bound_even(p) : flow::tail_bound_odd(p);
          worst_domination = std::min(worst_domination, sk - bound);
          ++bound_total;
        }
      }
    }
    factor_res = {worst_factor > 0.0, worst_factor, total};
    deriv_res = {worst_deriv < 0.0, worst_deriv, total};
    bound_res = {worst_domination >= -1e-9, worst_domination, bound_total};
    rep.lemmas["tail_descent_factor"] = factor_res;
    rep.lemmas["tail_pair_derivative"] = deriv_res;
    rep.lemmas["tail_bound_dominates"] = bound_res;
  }

  {  // exact zero of the tail bound at y = 0, largest admissible t
    const int ell = n % 2 == 0 ? n / 2 : (n - 1) / 2;
    const comb::ExactRat zero = n % 2 == 0 ? flow::tail_bound_even_exact(n, ell - 2, 0)
                                           : flow::tail_bound_odd_exact(n, ell - 1, 0);
    rep.lemmas["tail_bound_zero"] = {zero == 0, comb::to_double(zero), 1};
  }

  {  // strict decrease of the exact tail bound in t at y = 0
    const bool even = n % 2 == 0;
    const int ell = even ? n / 2 : (n - 1) / 2;
    const int t_lo = even ? 1 : 2;
    const int t_hi = even ? ell - 2 : ell - 1;
    bool pass = true;
    double worst = std::numeric_limits<double>::infinity();
    long long count = 0;
    const auto bound_at = [&](int t) {
      return even ? flow::tail_bound_even_exact(n, t, 0) : flow::tail_bound_odd_exact(n, t, 0);
    };
    for (int t = t_lo; t <= t_hi; ++t) {
      const comb::ExactRat drop = bound_at(t - 1) - bound_at(t);
      pass = pass && (drop > 0);
      worst = std::min(worst, comb::to_double(drop));
      ++count;
    }
    if (count == 0) {  // n in {4, 5} has a single admissible t
      pass = true;
      worst = 0.0;
    }
    rep.lemmas["tail_bound_monotone_t"] = {pass, worst, count};
  }

  {  // strict increase in y on (0, 1], grid check scaled by (n-2)!
    const bool even = n % 2 == 0;
    const int ell = even ? n / 2 : (n - 1) / 2;
    const int t_lo = even ? 0 : 1;
    const int t_hi = even ? ell - 2 : ell - 1;
    const double scale = comb::factorials_as_double()[n - 2];
    double worst = std::numeric_limits<double>::infinity();
    long long count = 0;
    constexpr int kGrid = 1000;
    for (int t = t_lo; t <= t_hi; ++t) {
      double prev = even ? flow::tail_bound_even({n, t, 0.0}) : flow::tail_bound_odd({n, t, 0.0});
      for (int s = 1; s <= kGrid; ++s) {
        const double y = static_cast<double>(s) / kGrid;
        const double cur =
            even ? flow::tail_bound_even({n, t, y}) : flow::tail_bound_odd({n, t, y});
        worst = std::min(worst, (cur - prev) / scale);
        prev = cur;
        ++count;
      }
    }
    rep.lemmas["tail_bound_increasing_y"] = {worst > 1e-12, worst, count};
  }

  {  // sum_j c_{n-2-j} C(n-2, j) = (n-2)!: permutations of [n-2] by fixed-point count
    comb::ExactInt sum = 0;
    for (int j = 0; j <= n - 2; ++j) sum += comb::derangements(n - 2 - j) * comb::binomial(n - 2, j);
    const bool ok = sum == comb::factorial(n - 2);
    rep.lemmas["fixed_count_identity"] = {ok, ok ? 0.0 : 1.0, 1};
  }

  {  // classify returns critical_candidate only at the all-ones point
    bool pass = true;
    double worst = std::numeric_limits<double>::infinity();
    long long checked = 0;
    for (long long i = 0; i < samples; ++i) {
      rng::SplitMix64 g = rng::substream(cfg.seed, kTagClassify + static_cast<std::uint64_t>(i));
      // half the draws stress the neighborhood of the critical point
      std::vector<double> x = (i % 2 == 0)
                                  ? rng::uniform_point(g, n, 0.0, 6.0)
                                  : rng::uniform_point(g, n, 0.5, 1.5);
      double dev = 0.0;
      for (double v : x) dev = std::max(dev, std::abs(v - 1.0));
      const flow::FlowReport fr = flow::classify(x);
      ++checked;
      if (fr.region == flow::Region::critical_candidate && dev > 1e-9) {
        pass = false;
        worst = std::min(worst, dev);
      }
      if (fr.region == flow::Region::descent) {
        // witness consistency: a small move along the direction decreases gap
        if (i % 97 == 0) {
          std::vector<double> moved = x;
          double norm = 0.0;
          for (double v : *fr.direction) norm += v * v;
          norm = std::sqrt(norm);
          for (int d = 0; d < n; ++d) moved[d] = std::max(moved[d] + 1e-6 * (*fr.direction)[d] / norm, 0.0);
          if (!(fixedpoint::gap(moved) < fixedpoint::gap(x))) pass = false;
        }
      }
    }
    if (pass) worst = 0.0;
    rep.lemmas["classify_no_false_critical"] = {pass, worst, checked};
  }

  rep.samples_run = samples;
  rep.pass = std::all_of(rep.lemmas.begin(), rep.lemmas.end(),
                         [](const auto& kv) { return kv.second.pass; });
  return rep;
}

VerifyReport check_n2(long long samples, std::uint64_t seed, double tolerance) {
  VerifyReport rep;
  rep.config = RunConfig{2, samples, seed, tolerance, 0.0, Mode::lemmas, Format::json, false};

  LemmaResult random_res;
  random_res.samples = samples;
  double worst = std::numeric_limits<double>::infinity();
  for (long long i = 0; i < samples; ++i) {
    rng::SplitMix64 g = rng::substream(seed, kTagSmallCase + static_cast<std::uint64_t>(i));
    const double a = g.uniform(0.0, 12.0);
    const double b = g.uniform(0.0, 12.0);
    worst = std::min(worst, 1.0 + a * b - 2.0 * std::sqrt(a * b));
  }
  random_res.worst = worst;
  random_res.pass = worst >= -tolerance;
  rep.lemmas["am_gm_pairs"] = random_res;

  LemmaResult curve_res;
  double worst_abs = 0.0;
  for (double t : {0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    const std::vector<double> x{t, 1.0 / t};
    worst_abs = std::max(worst_abs, std::abs(fixedpoint::gap(x)));
    ++curve_res.samples;
  }
  curve_res.worst = worst_abs;
  curve_res.pass = worst_abs <= 1e-12;
  rep.lemmas["equality_curve"] = curve_res;

  rep.samples_run = samples + curve_res.samples;
  rep.pass = random_res.pass && curve_res.pass;
  return rep;
}

VerifyReport check_n3(long long samples, std::uint64_t seed, double tolerance) {
  VerifyReport rep;
  rep.config = RunConfig{3, samples, seed, tolerance, 0.0, Mode::lemmas, Format::json, false};

  double worst_main = std::numeric_limits<double>::infinity();
  double worst_amgm = std::numeric_limits<double>::infinity();
  double worst_schur = std::numeric_limits<double>::infinity();
  double worst_chain = std::numeric_limits<double>::infinity();
  for (long long i = 0; i < samples; ++i) {
    rng::SplitMix64 g = rng::substream(seed, kTagSmallCase + static_cast<std::uint64_t>(i));
    const double x = g.uniform(0.0, 10.0);
    const double y = g.uniform(0.0, 10.0);
    const double z = g.uniform(0.0, 10.0);

    const double main_slack = 2.0 + x + y + z + x * y * z -
                              2.0 * (std::sqrt(x * y) + std::sqrt(y * z) + std::sqrt(x * z));
    worst_main = std::min(worst_main, main_slack);

    worst_amgm = std::min(worst_amgm, 2.0 + x * y * z - 3.0 * std::cbrt(x * y * z));

    const double a = std::cbrt(x), b = std::cbrt(y), c = std::cbrt(z);
    const double schur = a * (a - b) * (a - c) + b * (b - c) * (b - a) + c * (c - a) * (c - b);
    worst_schur = std::min(worst_schur, schur);

    const double chain = a * b * (a + b) + b * c * (b + c) + a * c * (a + c) -
                         2.0 * (std::pow(a * b, 1.5) + std::pow(b * c, 1.5) + std::pow(a * c, 1.5));
    worst_chain = std::min(worst_chain, chain);
  }
  rep.lemmas["eq_n3"] = {worst_main >= -tolerance, worst_main, samples};
  rep.lemmas["am_gm_two_ones"] = {worst_amgm >= -tolerance, worst_amgm, samples};
  rep.lemmas["schur_degree3"] = {worst_schur >= -tolerance, worst_schur, samples};
  rep.lemmas["am_gm_chain"] = {worst_chain >= -tolerance, worst_chain, samples};

  const double at_ones = std::abs(fixedpoint::gap(std::vector<double>{1.0, 1.0, 1.0}));
  rep.lemmas["equality_at_ones"] = {at_ones <= 1e-12, at_ones, 1};

  rep.samples_run = samples;
  rep.pass = std::all_of(rep.lemmas.begin(), rep.lemmas.end(),
                         [](const auto& kv) { return kv.second.pass; });
  return rep;
}

std::string emit_report(const VerifyReport& report, Format format) {
  if (format == Format::json) {
    nlohmann::ordered_json j;
    j["config"] = config_json(report.config);
    j["samples_run"] = report.samples_run;
    j["min_gap"] = report.min_gap;
    j["argmin"] = report.argmin;
    j["violations"] = report.violations;
    j["evaluator_max_disagreement"] = report.evaluator_max_disagreement;
    nlohmann::ordered_json lemmas = nlohmann::ordered_json::object();
    for (const auto& [name, res] : report.lemmas) {
      lemmas[name] = {{"pass", res.pass}, {"worst", res.worst}, {"samples", res.samples}};
    }
    j["lemmas"] = lemmas;
    j["pass"] = report.pass;
    return j.dump(2) + "\n";
  }

  std::string out = "field,value\n";
  const RunConfig& cfg = report.config;
  out += "config.n," + std::to_string(cfg.n) + "\n";
  out += std::string("config.mode,") + mode_name(cfg.mode) + "\n";
  out += "config.samples," + std::to_string(cfg.samples) + "\n";
  out += "config.seed," + std::to_string(cfg.seed) + "\n";
  out += "config.tolerance," + format_g17(cfg.tolerance) + "\n";
  out += "config.box," + format_g17(effective_box(cfg)) + "\n";
  out += std::string("config.format,") + format_name(cfg.format) + "\n";
  out += "config.exact," + std::to_string(cfg.exact ? 1 : 0) + "\n";
  out += "samples_run," + std::to_string(report.samples_run) + "\n";
  out += "min_gap," + format_g17(report.min_gap) + "\n";
  std::string argmin;
  for (std::size_t i = 0; i < report.argmin.size(); ++i) {
    if (i) argmin += ";";
    argmin += format_g17(report.argmin[i]);
  }
  out += "argmin," + argmin + "\n";
  out += "violations," + std::to_string(report.violations) + "\n";
  out += "evaluator_max_disagreement," + format_g17(report.evaluator_max_disagreement) + "\n";
  for (const auto& [name, res] : report.lemmas) {
    out += "lemma." + name + ".pass," + std::to_string(res.pass ? 1 : 0) + "\n";
    out += "lemma." + name + ".worst," + format_g17(res.worst) + "\n";
    out += "lemma." + name + ".samples," + std::to_string(res.samples) + "\n";
  }
  out += "pass," + std::to_string(report.pass ? 1 : 0) + "\n";
  return out;
}

}  // namespace symflow::verify
