#include "symflow/combinatorics.hpp"
#include "symflow/fixedpoint.hpp"
#include "symflow/flow.hpp"
#include "symflow/sympoly.hpp"
#include "symflow/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using symflow::comb::ExactInt;
using symflow::comb::ExactRat;

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolation = 2;

std::vector<double> parse_point(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    const double v = std::stod(item, &pos);
    if (pos != item.size()) throw CLI::ValidationError("--point", "bad coordinate: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError("--point", "empty point");
  return out;
}

// Base-10 only; the cpp_int string constructor would read a leading zero as
// octal.
ExactInt parse_exact_int(const std::string& s) {
  std::size_t i = 0;
  bool negative = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) negative = s[i++] == '-';
  if (i == s.size()) throw CLI::ValidationError("--point", "bad integer: " + s);
  ExactInt v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9')
      throw CLI::ValidationError("--point", "bad integer: " + s);
    v = v * 10 + (s[i] - '0');
  }
  return negative ? -v : v;
}

// Accepts "p/q", integers, and decimal literals; everything becomes an exact
// rational.
ExactRat parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    const ExactInt num = parse_exact_int(s.substr(0, slash));
    const ExactInt den = parse_exact_int(s.substr(slash + 1));
    if (den == 0) throw CLI::ValidationError("--point", "zero denominator: " + s);
    return ExactRat(num, den);
  }
  const auto dot = s.find('.');
  if (dot == std::string::npos) return ExactRat(parse_exact_int(s));
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  bool negative = false;
  if (!digits.empty() && (digits[0] == '+' || digits[0] == '-')) {
    negative = digits[0] == '-';
    digits = digits.substr(1);
  }
  ExactInt scale = 1;
  for (std::size_t i = dot + 1; i < s.size(); ++i) scale *= 10;
  ExactRat r(parse_exact_int(digits.empty() ? "0" : digits), scale);
  return negative ? -r : r;
}

std::vector<ExactRat> parse_point_exact(const std::string& csv) {
  std::vector<ExactRat> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  if (out.empty()) throw CLI::ValidationError("--point", "empty point");
  return out;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw std::runtime_error("cannot open output file: " + out_path);
  f << text;
  if (!f) throw std::runtime_error("write failed: " + out_path);
}

std::string rat_string(const ExactRat& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

symflow::verify::Format parse_format(const std::string& s) {
  if (s == "json") return symflow::verify::Format::json;
  if (s == "csv") return symflow::verify::Format::csv;
  throw CLI::ValidationError("--format", "must be json or csv");
}

int cmd_tables(int n, const std::string& format, const std::string& out_path) {
  namespace comb = symflow::comb;
  if (format == "json") {
    nlohmann::ordered_json j;
    j["n"] = n;
    j["factorial"] = rat_string(ExactRat(comb::factorial(n)));
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int k = 0; k <= n; ++k) {
      nlohmann::ordered_json row;
      row["k"] = k;
      row["derangements"] = rat_string(ExactRat(comb::derangements(k)));
      row["rencontres"] = rat_string(ExactRat(comb::rencontres(n, k)));
      row["fraction"] = rat_string(comb::rencontres_fraction(n, k));
      row["fraction_double"] = comb::to_double(comb::rencontres_fraction(n, k));
      rows.push_back(row);
    }
    j["rows"] = rows;
    write_output(j.dump(2) + "\n", out_path);
  } else {
    std::string out = "k,derangements,rencontres,fraction,fraction_double\n";
    for (int k = 0; k <= n; ++k) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", comb::to_double(comb::rencontres_fraction(n, k)));
      out += std::to_string(k) + "," + rat_string(ExactRat(comb::derangements(k))) + "," +
             rat_string(ExactRat(comb::rencontres(n, k))) + "," +
             rat_string(comb::rencontres_fraction(n, k)) + "," + buf + "\n";
    }
    write_output(out, out_path);
  }
  return kExitPass;
}

int cmd_eval(const std::string& point_csv, int expected_n, bool exact,
             const std::string& out_path) {
  // In exact mode coordinates may be rationals like 3/2; the float routes
  // then run on the rounded values.
  std::vector<ExactRat> xr;
  std::vector<double> x;
  if (exact) {
    xr = parse_point_exact(point_csv);
    for (const ExactRat& r : xr) x.push_back(symflow::comb::to_double(r));
  } else {
    x = parse_point(point_csv);
  }
  if (expected_n > 0 && static_cast<int>(x.size()) != expected_n)
    throw std::invalid_argument("--n does not match the point length");
  const symflow::fixedpoint::MeasureEval ev = symflow::fixedpoint::evaluate(x);
  nlohmann::ordered_json j;
  j["n"] = x.size();
  j["point"] = x;
  j["lhs_formula"] = ev.lhs_formula;
  if (ev.lhs_enum) j["lhs_enum"] = *ev.lhs_enum;
  if (ev.lhs_permanent) j["lhs_permanent"] = *ev.lhs_permanent;
  j["rhs"] = ev.rhs;
  j["gap"] = ev.gap;
  const symflow::fixedpoint::Gradient g = symflow::fixedpoint::gradient(x);
  j["gradient"] = g.partials;
  j["gradient_valid"] = g.valid;
  if (exact) {
    const auto e = symflow::sympoly::elem_all_exact(xr);
    nlohmann::ordered_json elems = nlohmann::ordered_json::array();
    nlohmann::ordered_json means = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < e.size(); ++k) {
      elems.push_back(rat_string(e[k]));
      means.push_back(rat_string(e[k] / ExactRat(symflow::comb::binomial(
                                            static_cast<int>(xr.size()), static_cast<int>(k)))));
    }
    j["exact_elem"] = elems;
    j["exact_normalized"] = means;
    j["exact_lhs"] = rat_string(symflow::fixedpoint::lhs_formula_exact(xr));
  }
  write_output(j.dump(2) + "\n", out_path);

  double tol = 1e-9 * std::max(1.0, std::abs(ev.lhs_formula));
  if (ev.lhs_enum && std::abs(*ev.lhs_enum - ev.lhs_formula) > tol) return kExitViolation;
  if (ev.lhs_permanent && std::abs(*ev.lhs_permanent - ev.lhs_formula) > tol) return kExitViolation;
  if (ev.gap < -1e-12) return kExitViolation;  // would be a counterexample
  return kExitPass;
}

int cmd_flow(const std::string& start_csv, double step, int max_iters,
             const std::string& out_path) {
  const std::vector<double> x0 = parse_point(start_csv);
  const symflow::flow::FlowReport cls = symflow::flow::classify(x0);
  const symflow::flow::DescendResult res = symflow::flow::descend(x0, step, max_iters);

  nlohmann::ordered_json j;
  j["start"] = x0;
  nlohmann::ordered_json c;
  c["region"] = symflow::flow::region_name(cls.region);
  c["witness"] = cls.witness;
  if (cls.k) c["k"] = *cls.k;
  if (cls.direction) c["direction"] = *cls.direction;
  j["classification"] = c;

  bool monotone = true;
  for (std::size_t i = 1; i < res.gap_trajectory.size(); ++i)
    monotone = monotone && res.gap_trajectory[i] < res.gap_trajectory[i - 1];
  double dist = 0.0;
  for (double v : res.final_point) dist = std::max(dist, std::abs(v - 1.0));

  nlohmann::ordered_json d;
  d["status"] = res.status == symflow::flow::DescendStatus::converged  ? "converged"
                : res.status == symflow::flow::DescendStatus::stalled ? "stalled"
                                                                      : "max_iters";
  d["iterations"] = res.iterations;
  d["final_point"] = res.final_point;
  d["final_gap"] = res.final_gap;
  d["distance_to_ones"] = dist;
  d["gap_monotone"] = monotone;
  j["descend"] = d;
  write_output(j.dump(2) + "\n", out_path);

  const bool ok = monotone && (res.status == symflow::flow::DescendStatus::converged || dist <= 1e-4);
  return ok ? kExitPass : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical certification of the fixed-point-measure inequality for "
               "elementary symmetric polynomials"};
  app.require_subcommand(1);

  // tables
  auto* tables = app.add_subcommand("tables", "Exact combinatorial tables for one n");
  int tables_n = 8;
  std::string tables_format = "json", tables_out;
  tables->add_option("--n", tables_n, "table size")->check(CLI::Range(0, symflow::comb::kTableMax));
  tables->add_option("--format", tables_format)->check(CLI::IsMember({"json", "csv"}));
  tables->add_option("--out", tables_out, "output path (default stdout)");

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate all routes at one point");
  std::string eval_point, eval_out;
  int eval_n = 0;
  bool eval_exact = false;
  eval->add_option("--point", eval_point, "comma-separated coordinates")->required();
  eval->add_option("--n", eval_n, "optional; must match the point length");
  eval->add_flag("--exact", eval_exact, "also evaluate the polynomial side in exact rationals");
  eval->add_option("--out", eval_out);

  // verify
  auto* verify = app.add_subcommand("verify", "Sampling / grid / minimization certification");
  symflow::verify::RunConfig cfg;
  std::string verify_mode = "sample", verify_format = "json", verify_out;
  verify->add_option("--n", cfg.n, "dimension")->required()->check(CLI::Range(2, 64));
  verify->add_option("--samples", cfg.samples)->check(CLI::PositiveNumber);
  verify->add_option("--seed", cfg.seed);
  verify->add_option("--mode", verify_mode)->check(CLI::IsMember({"sample", "grid", "minimize"}));
  verify->add_option("--box", cfg.box, "per-coordinate upper bound (default 6n)");
  verify->add_option("--tol", cfg.tolerance)->check(CLI::PositiveNumber);
  verify->add_option("--format", verify_format)->check(CLI::IsMember({"json", "csv"}));
  verify->add_option("--out", verify_out);

  // flow
  auto* flowcmd = app.add_subcommand("flow", "Classify a point and run the descent flow");
  std::string flow_start, flow_out;
  int flow_n = 0, flow_max_iters = 10000;
  double flow_step = 0.1;
  flowcmd->add_option("--start", flow_start, "comma-separated start point")->required();
  flowcmd->add_option("--n", flow_n, "optional; must match the start length");
  flowcmd->add_option("--step", flow_step)->check(CLI::PositiveNumber);
  flowcmd->add_option("--max-iters", flow_max_iters)->check(CLI::PositiveNumber);
  flowcmd->add_option("--out", flow_out);

  // check-lemmas
  auto* lemmas = app.add_subcommand("check-lemmas", "Audit the region and descent lemmas");
  symflow::verify::RunConfig lcfg;
  lcfg.mode = symflow::verify::Mode::lemmas;
  std::string lemmas_format = "json", lemmas_out;
  lemmas->add_option("--n", lcfg.n, "dimension")->required()->check(CLI::Range(2, 64));
  lemmas->add_option("--samples", lcfg.samples)->check(CLI::PositiveNumber);
  lemmas->add_option("--seed", lcfg.seed);
  lemmas->add_option("--tol", lcfg.tolerance)->check(CLI::PositiveNumber);
  lemmas->add_option("--format", lemmas_format)->check(CLI::IsMember({"json", "csv"}));
  lemmas->add_option("--out", lemmas_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (tables->parsed()) return cmd_tables(tables_n, tables_format, tables_out);

    if (eval->parsed()) return cmd_eval(eval_point, eval_n, eval_exact, eval_out);

    if (verify->parsed()) {
      cfg.format = parse_format(verify_format);
      if (verify_mode == "sample")
        cfg.mode = symflow::verify::Mode::sample;
      else if (verify_mode == "grid")
        cfg.mode = symflow::verify::Mode::grid;
      else
        cfg.mode = symflow::verify::Mode::minimize;
      symflow::verify::VerifyReport rep;
      switch (cfg.mode) {
        case symflow::verify::Mode::sample: rep = symflow::verify::run_sampling(cfg); break;
        case symflow::verify::Mode::grid: rep = symflow::verify::run_grid(cfg); break;
        default: rep = symflow::verify::run_minimize(cfg); break;
      }
      write_output(symflow::verify::emit_report(rep, cfg.format), verify_out);
      return rep.pass ? kExitPass : kExitViolation;
    }

    if (flowcmd->parsed()) {
      if (flow_n > 0) {
        const auto pt = parse_point(flow_start);
        if (static_cast<int>(pt.size()) != flow_n)
          throw std::invalid_argument("--n does not match the start length");
      }
      return cmd_flow(flow_start, flow_step, flow_max_iters, flow_out);
    }

    if (lemmas->parsed()) {
      lcfg.format = parse_format(lemmas_format);
      const symflow::verify::VerifyReport rep = symflow::verify::run_lemma_audit(lcfg);
      write_output(symflow::verify::emit_report(rep, lcfg.format), lemmas_out);
      return rep.pass ? kExitPass : kExitViolation;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
