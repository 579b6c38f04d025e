// Acceptance suite: end-to-end checks of the certified properties, one
// printed pass/fail line per criterion. Run with --criterion K for a single
// criterion, or with no arguments for all of them.
#include "oracles.hpp"
#include "symflow/combinatorics.hpp"
#include "symflow/fixedpoint.hpp"
#include "symflow/flow.hpp"
#include "symflow/rng.hpp"
#include "symflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <string>
#include <vector>

namespace {

using namespace symflow;

constexpr std::uint64_t kSeed = 0xA11CE5;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::vector<double> tail_config(rng::SplitMix64& g, int n, int k) {
  const double T = g.uniform(1.0, 6.0);
  std::vector<double> x(n, T);
  const double xk = T * g.uniform(1e-6, 1.0 - 1e-6);
  x[k - 1] = xk;
  for (int i = 0; i < k - 1; ++i) x[i] = g.uniform(0.0, xk);
  std::sort(x.begin(), x.begin() + k);
  return x;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

Outcome criterion_1_triple_agreement() {
  double worst = 0.0;
  for (int n = 2; n <= 9; ++n) {
    worst = std::max(worst, verify::evaluator_agreement(n, 100, kSeed, 6.0));
  }
  return {worst <= 1e-9, "max relative disagreement " + fmt(worst) + " (tol 1e-9)"};
}

Outcome criterion_2_main_inequality() {
  Outcome out;
  double worst_min = std::numeric_limits<double>::infinity();
  long long violations = 0;
  for (int n = 2; n <= 12; ++n) {
    verify::RunConfig cfg;
    cfg.n = n;
    cfg.samples = 100000;
    cfg.seed = kSeed + n;
    const auto rep = verify::run_sampling(cfg);
    violations += rep.violations;
    worst_min = std::min(worst_min, rep.min_gap);
  }
  double worst_gap = 0.0, worst_dist = 0.0;
  for (int n = 3; n <= 12; ++n) {
    verify::RunConfig cfg;
    cfg.n = n;
    cfg.samples = 20;
    cfg.seed = kSeed + n;
    const auto rep = verify::run_minimize(cfg);
    worst_gap = std::max(worst_gap, std::abs(rep.min_gap));
    for (double v : rep.argmin) worst_dist = std::max(worst_dist, std::abs(v - 1.0));
    out.pass = out.pass && rep.pass;
  }
  out.pass = out.pass && violations == 0 && worst_min >= -1e-12;
  out.detail = "violations " + std::to_string(violations) + ", sampled min gap " + fmt(worst_min) +
               ", minimized |gap| " + fmt(worst_gap) + ", argmin distance " + fmt(worst_dist);
  return out;
}

Outcome criterion_3_equality_structure() {
  double worst = 0.0;
  for (int n = 2; n <= 20; ++n) {
    worst = std::max(worst, std::abs(fixedpoint::gap(std::vector<double>(n, 1.0))));
  }
  double worst_curve = 0.0;
  for (double t : {0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    worst_curve = std::max(worst_curve, std::abs(fixedpoint::gap(std::vector<double>{t, 1.0 / t})));
  }
  const bool pass = worst <= 1e-12 && worst_curve <= 1e-12;
  return {pass, "max |gap(ones)| " + fmt(worst) + ", max |gap| on the n=2 hyperbola " +
                    fmt(worst_curve) + " (tol 1e-12)"};
}

Outcome criterion_4_derivatives() {
  double worst_grad = 0.0;
  for (int n = 3; n <= 10; ++n) {
    auto g = rng::substream(kSeed, 400 + n);
    for (int rep = 0; rep < 50; ++rep) {
      const auto x = rng::uniform_point(g, n, 0.1, 6.0);
      const auto grad = fixedpoint::gradient(x);
      for (int i = 0; i < n; ++i) {
        const double fd = oracle::gap_partial_fd(x, i, 1e-5);
        worst_grad = std::max(worst_grad, std::abs(grad.partials[i] - fd) /
                                              std::max(1.0, std::abs(grad.partials[i])));
      }
    }
  }
  double worst_hess = 0.0;
  for (int n = 4; n <= 8; ++n) {
    auto g = rng::substream(kSeed, 500 + n);
    for (int rep = 0; rep < 20; ++rep) {
      const auto x = rng::uniform_point(g, n, 0.2, 6.0);
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          const double an = fixedpoint::hessian_entry(x, i, j);
          const double fd = oracle::gap_second_fd(x, i, j, 1e-5);
          worst_hess = std::max(worst_hess, std::abs(an - fd) / std::max(1.0, std::abs(an)));
        }
      }
    }
  }
  double worst_ones = 0.0;
  for (int n = 2; n <= 20; ++n) {
    const auto grad = fixedpoint::gradient(std::vector<double>(n, 1.0));
    for (double v : grad.partials) worst_ones = std::max(worst_ones, std::abs(v));
  }
  const bool pass = worst_grad <= 1e-6 && worst_hess <= 1e-4 && worst_ones <= 1e-12;
  return {pass, "gradient FD error " + fmt(worst_grad) + " (tol 1e-6), hessian FD error " +
                    fmt(worst_hess) + " (tol 1e-4), |grad(ones)| " + fmt(worst_ones) +
                    " (tol 1e-12)"};
}

Outcome criterion_5_exact_identities() {
  bool pass = true;
  for (int n = 0; n <= 20; ++n) {
    comb::ExactInt total = 0, weighted = 0;
    for (int k = 0; k <= n; ++k) {
      total += comb::rencontres(n, k);
      weighted += k * comb::rencontres(n, k);
    }
    pass = pass && total == comb::factorial(n);
    if (n >= 1) pass = pass && weighted == comb::factorial(n);
  }
  for (int n = 4; n <= 20; n += 2) {
    pass = pass && flow::tail_bound_even_exact(n, n / 2 - 2, 0) == 0;
    for (int t = 1; t <= n / 2 - 2; ++t) {
      pass = pass && flow::tail_bound_even_exact(n, t - 1, 0) > flow::tail_bound_even_exact(n, t, 0);
    }
  }
  for (int n = 5; n <= 21; n += 2) {
    const int ell = (n - 1) / 2;
    pass = pass && flow::tail_bound_odd_exact(n, ell - 1, 0) == 0;
    for (int t = 2; t <= ell - 1; ++t) {
      pass = pass && flow::tail_bound_odd_exact(n, t - 1, 0) > flow::tail_bound_odd_exact(n, t, 0);
    }
  }
  for (int n = 4; n <= 20; ++n) {
    comb::ExactInt sum = 0;
    for (int j = 0; j <= n - 2; ++j) sum += comb::derangements(n - 2 - j) * comb::binomial(n - 2, j);
    pass = pass && sum == comb::factorial(n - 2);
  }
  return {pass, pass ? "all exact identities hold with zero tolerance"
                     : "an exact identity failed"};
}

Outcome criterion_6_lemma_audits() {
  bool pass = true;
  double worst_boundary = std::numeric_limits<double>::infinity();
  double worst_partial = std::numeric_limits<double>::infinity();
  double worst_inner = -std::numeric_limits<double>::infinity();
  for (int n = 4; n <= 10; ++n) {
    for (long long i = 0; i < 10000; ++i) {
      auto g = rng::substream(kSeed + n, 600000 + i);
      const auto x = rng::simplex_point(g, n, 6.0 * n);
      worst_boundary = std::min(worst_boundary, fixedpoint::gap(x));
    }
    for (long long i = 0; i < 10000; ++i) {
      auto g = rng::substream(kSeed + n, 700000 + i);
      const auto above = rng::uniform_point(g, n, 1.001, 6.0);
      const auto ga = fixedpoint::gradient(above);
      for (double v : ga.partials) worst_partial = std::min(worst_partial, v);
      const auto below = rng::uniform_point(g, n, 1e-4, 0.999);
      const auto gb = fixedpoint::gradient(below);
      double inner = 0.0;
      for (double v : gb.partials) inner += v;
      worst_inner = std::max(worst_inner, inner);
    }
  }
  pass = pass && worst_boundary >= 5.0 / 6.0 - 1e-9 && worst_partial > 0.0 && worst_inner < 0.0;

  double worst_factor = std::numeric_limits<double>::infinity();
  double worst_deriv = -std::numeric_limits<double>::infinity();
  for (int n = 4; n <= 12; ++n) {
    for (int k = 1; k <= n - 1; ++k) {
      for (long long i = 0; i < 1000; ++i) {
        auto g = rng::substream(kSeed + n, 800000 + (static_cast<std::uint64_t>(k) << 32) + i);
        const auto x = tail_config(g, n, k);
        const auto sp = flow::SortedPoint::from(x);
        worst_factor = std::min(worst_factor, flow::descent_factor(sp, k));
        worst_deriv = std::max(worst_deriv, flow::pair_derivative(sp, k));
      }
    }
  }
  pass = pass && worst_factor > 0.0 && worst_deriv < 0.0;
  return {pass, "boundary min gap " + fmt(worst_boundary) + " (>= 5/6 - 1e-9), min partial above one " +
                    fmt(worst_partial) + ", max <grad,1> below one " + fmt(worst_inner) +
                    ", min S_k " + fmt(worst_factor) + ", max O_k gap " + fmt(worst_deriv)};
}

Outcome criterion_7_flow_convergence() {
  bool pass = true;
  double worst_dist = 0.0;
  int worst_iters = 0;
  for (int n = 4; n <= 8; ++n) {
    for (int s = 0; s < 50; ++s) {
      auto g = rng::substream(kSeed + n, 900000 + s);
      const auto x0 = rng::uniform_point(g, n, 0.1, 6.0);
      const auto res = flow::descend(x0, 0.1, 10000);
      double dist = 0.0;
      for (double v : res.final_point) dist = std::max(dist, std::abs(v - 1.0));
      worst_dist = std::max(worst_dist, dist);
      worst_iters = std::max(worst_iters, res.iterations);
      for (std::size_t i = 1; i < res.gap_trajectory.size(); ++i) {
        pass = pass && res.gap_trajectory[i] < res.gap_trajectory[i - 1];
      }
      pass = pass && dist <= 1e-4 && res.iterations <= 10000;
    }
  }
  return {pass, "worst distance to ones " + fmt(worst_dist) + " (tol 1e-4), worst iterations " +
                    std::to_string(worst_iters) + " (cap 10000)"};
}

Outcome criterion_8_n3_replay() {
  const auto rep = verify::check_n3(10000, kSeed, 1e-12);
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& [name, res] : rep.lemmas) {
    if (name != "equality_at_ones") worst = std::min(worst, res.worst);
  }
  return {rep.pass, "worst slack over the scaled inequality and its proof steps " + fmt(worst) +
                        " (tol -1e-12)"};
}

Outcome criterion_9_determinism() {
  verify::RunConfig cfg;
  cfg.n = 6;
  cfg.samples = 20000;
  cfg.seed = kSeed;

  setenv("SYMFLOW_THREADS", "1", 1);
  const std::string serial = verify::emit_report(verify::run_sampling(cfg), verify::Format::json);
  const std::string serial_again =
      verify::emit_report(verify::run_sampling(cfg), verify::Format::json);
  setenv("SYMFLOW_THREADS", "4", 1);
  const std::string parallel =
      verify::emit_report(verify::run_sampling(cfg), verify::Format::json);

  verify::RunConfig mcfg;
  mcfg.n = 5;
  mcfg.samples = 20;
  mcfg.seed = kSeed;
  mcfg.mode = verify::Mode::minimize;
  setenv("SYMFLOW_THREADS", "1", 1);
  const std::string min_serial =
      verify::emit_report(verify::run_minimize(mcfg), verify::Format::json);
  setenv("SYMFLOW_THREADS", "4", 1);
  const std::string min_parallel =
      verify::emit_report(verify::run_minimize(mcfg), verify::Format::json);
  unsetenv("SYMFLOW_THREADS");

  const bool pass =
      serial == serial_again && serial == parallel && min_serial == min_parallel;
  return {pass, pass ? "reports byte-identical across repeats and worker counts"
                     : "report bytes differ"};
}

struct Criterion {
  int id;
  const char* name;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "triple-evaluator agreement", criterion_1_triple_agreement},
    {2, "main inequality", criterion_2_main_inequality},
    {3, "equality structure", criterion_3_equality_structure},
    {4, "gradient and hessian correctness", criterion_4_derivatives},
    {5, "exact identities", criterion_5_exact_identities},
    {6, "lemma audits", criterion_6_lemma_audits},
    {7, "flow convergence", criterion_7_flow_convergence},
    {8, "n=3 proof-step replay", criterion_8_n3_replay},
    {9, "determinism", criterion_9_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    }
  }
  int failures = 0;
  for (const auto& c : kCriteria) {
    if (only != 0 && c.id != only) continue;
    const Outcome out = c.run();
    std::printf("[%s] criterion %d (%s): %s\n", out.pass ? "PASS" : "FAIL", c.id, c.name,
                out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  return failures;
}
