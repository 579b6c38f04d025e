#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace symflow::verify {

enum class Mode { sample, grid, minimize, flow, lemmas, tables, eval };
enum class Format { json, csv };

const char* mode_name(Mode m);
const char* format_name(Format f);

struct RunConfig {
  int n = 4;
  long long samples = 1000;
  std::uint64_t seed = 1;
  double tolerance = 1e-12;
  double box = 0.0;  // <= 0 means the compact-region default 6n
  Mode mode = Mode::sample;
  Format format = Format::json;
  bool exact = false;
};

double effective_box(const RunConfig& cfg);

struct LemmaResult {
  bool pass = false;
  double worst = 0.0;  // worst witness observed (sign convention per lemma)
  long long samples = 0;
};

struct VerifyReport {
  RunConfig config;
  long long samples_run = 0;
  double min_gap = 0.0;
  std::vector<double> argmin;
  long long violations = 0;
  double evaluator_max_disagreement = 0.0;
  std::map<std::string, LemmaResult> lemmas;
  bool pass = true;
};

/// Deterministic probe set, always evaluated regardless of the seed:
/// all-zeros, all-ones, the simplex center 6*ones, unit and 6n basis
/// multiples, and for n = 2 the hyperbola points (t, 1/t) with dyadic t.
std::vector<std::vector<double>> probe_points(int n, double box);

/// Uniform sampling of [0, box]^n plus the probe set; flags any point with
/// gap < -tolerance as a violation.
VerifyReport run_sampling(const RunConfig& cfg);

/// Lattice of G^n points over [0, box]^n with G = max(2, floor(samples^{1/n})),
/// plus the probe set. Requires n <= 20.
VerifyReport run_grid(const RunConfig& cfg);

/// Multi-start projected gradient descent (cfg.samples starts in [0.1, 6]^n,
/// strict-decrease backtracking, floor 1e-12). Requires n >= 3. Passing means
/// the best minimum has |gap| <= 1e-6 within 1e-4 per coordinate of all-ones.
VerifyReport run_minimize(const RunConfig& cfg);

/// Per-lemma audit. n = 2 and n = 3 run the ad hoc small-case checks; n >= 4
/// runs the compact-region, sign-region, descent-factor and tail-bound
/// audits with cfg-controlled sample counts.
VerifyReport run_lemma_audit(const RunConfig& cfg);

/// n = 2: 1 + ab >= 2 sqrt(ab) on random pairs, equality on the hyperbola.
VerifyReport check_n2(long long samples, std::uint64_t seed, double tolerance);

/// n = 3: the scaled inequality plus each step of its elementary proof
/// (two-ones AM-GM, degree-3 Schur, the final AM-GM chain) on random triples.
VerifyReport check_n3(long long samples, std::uint64_t seed, double tolerance);

/// Max relative disagreement among the evaluation routes that are in range
/// (enumeration n <= 10, permanent n <= 28) over seeded points in [0, box]^n.
double evaluator_agreement(int n, long long points, std::uint64_t seed, double box);

/// Deterministic serialization; stable field order in both formats.
std::string emit_report(const VerifyReport& report, Format format);

/// Worker cap from SYMFLOW_THREADS (positive integer), or a hardware-based
/// default. Results never depend on the value; only wall time does.
int worker_count();

}  // namespace symflow::verify
