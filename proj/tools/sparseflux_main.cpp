// sparseflux: command-line driver for the reconstruction rounds.
//
//   sparseflux sparse --matrix S.mtx --lower l.csv --upper u.csv
//   sparseflux --manifest problem.json --round 5 --out report.json
//   sparseflux bench --manifest problem.json --round 1 --compare-preprocess

#include "sparseflux/errors.hpp"
#include "sparseflux/io.hpp"
#include "sparseflux/oracle.hpp"
#include "sparseflux/rounds.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace sparseflux;
using nlohmann::json;

namespace {

struct Flags {
  std::string manifest;
  std::string matrix, lower, upper, vlower, vupper;
  std::string name;
  int round = 0;
  double lambda = 0.0;
  long K = 0;
  std::string rule;
  double epsilon = 0.0, p = 0.0;
  int iterations = 0;
  std::uint64_t seed = 0;
  double zero_tol = 0.0;
  bool no_preprocess = false;
  bool lower_bound = false;
  bool weighted_advantage = false;
  std::string row_norm;
  std::string backend;
  unsigned threads = 0;
  std::string out;
  // validate
  std::string report;
  std::vector<long> support_rows;
  // bench
  long samples = 10000;
  double budget = 300.0;
  bool compare_preprocess = false;
  // oracle
  long max_n = 14, max_c = 6;
};

struct Options {
  CLI::Option* round = nullptr;
  CLI::Option* lambda = nullptr;
  CLI::Option* K = nullptr;
  CLI::Option* rule = nullptr;
  CLI::Option* epsilon = nullptr;
  CLI::Option* p = nullptr;
  CLI::Option* iterations = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* zero_tol = nullptr;
  CLI::Option* row_norm = nullptr;
  CLI::Option* backend = nullptr;
  CLI::Option* threads = nullptr;
  CLI::Option* name = nullptr;
  CLI::Option* vlower = nullptr;
};

ProblemManifest build_manifest(const Flags& f, const Options& o) {
  ProblemManifest m;
  if (!f.manifest.empty()) {
    m = load_manifest(f.manifest);
  } else {
    if (f.matrix.empty() || f.lower.empty() || f.upper.empty())
      throw Error(ErrorKind::Config, "either --manifest or all of --matrix, --lower, --upper are required");
    m.matrix = f.matrix;
    m.lower = f.lower;
    m.upper = f.upper;
    m.name = m.matrix.stem().string();
  }
  if (!f.matrix.empty()) m.matrix = f.matrix;
  if (!f.lower.empty()) m.lower = f.lower;
  if (!f.upper.empty()) m.upper = f.upper;
  if (o.vlower->count()) {
    m.validation_lower = f.vlower;
    m.validation_upper = f.vupper;
  }
  if (o.name->count()) m.name = f.name;
  if (o.round->count()) m.round = f.round;
  if (o.lambda->count()) m.lambda = f.lambda;
  if (o.K->count()) m.K = f.K;
  if (o.rule->count()) m.config.rule = parse_weight_rule(f.rule);
  if (o.epsilon->count()) m.config.epsilon = f.epsilon;
  if (o.p->count()) m.config.p = f.p;
  if (o.iterations->count()) m.iterations = f.iterations;
  if (o.seed->count()) m.config.seed = f.seed;
  if (o.zero_tol->count()) m.tol.zero = f.zero_tol;
  if (o.row_norm->count()) m.config.row_norm = f.row_norm == "l1" ? RowNorm::L1 : RowNorm::L2;
  if (o.backend->count()) m.backend = f.backend;
  if (o.threads->count()) m.threads = f.threads;
  if (f.no_preprocess) m.preprocess = false;
  if (f.lower_bound) m.lower_bound = true;
  if (f.weighted_advantage) m.weighted_advantage = true;
  return m;
}

void emit(const json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream file(out);
  if (!file) throw Error(ErrorKind::Config, "cannot write " + out);
  file << j.dump(2) << "\n";
}

void print_summary(const ReconstructionReport& r) {
  std::fprintf(stderr, "%-8s %-16s %8s %8s %6s %8s  %s\n", "round", "dataset", "m", "n", "c", "s.c.", "time");
  std::fprintf(stderr, "%-8d %-16s %8ld %8ld %6ld %8s  %s\n", r.round, r.dataset.c_str(), static_cast<long>(r.m),
               static_cast<long>(r.n), static_cast<long>(r.c),
               r.round == 1 ? r.status.c_str() : std::to_string(r.score).c_str(), format_timing(r.timing).c_str());
  if (r.lower_bound) std::fprintf(stderr, "lower bound: %ld\n", static_cast<long>(*r.lower_bound));
  if (!r.freed_columns.empty()) std::fprintf(stderr, "freed columns: %zu\n", r.freed_columns.size());
  if (r.validation) std::fprintf(stderr, "validation: %.2f%% infeasible\n", r.validation->percentage);
  if (r.numerical_warning) std::fprintf(stderr, "warning: a subproblem failed; returned the best earlier iterate\n");
}

json timing_json(const TimingSummary& t) {
  return {{"samples", t.samples},
          {"mean_seconds", t.mean_seconds},
          {"std_seconds", t.std_seconds},
          {"formatted", format_timing(t)}};
}

json oracle_json(const OracleResult& r) {
  json w = json::array();
  for (const auto& s : r.witnesses) w.push_back(s.indices);
  return {{"optimum", r.optimum}, {"witnesses", w}, {"solves", r.solves}};
}

int run_report(const Problem& problem, const ProblemManifest& manifest, const std::string& out) {
  const ReconstructionReport report = run_round(problem, manifest);
  emit(to_json(report), out);
  print_summary(report);
  if (report.round == 1 && report.status == "infeasible") return exit_code(ErrorKind::Infeasible);
  if (report.round == 1 && report.status != "feasible") return exit_code(ErrorKind::Numerical);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse and jointly sparse steady-state flux reconstruction"};
  app.require_subcommand(0, 1);
  Flags f;
  Options o;

  app.add_option("--manifest", f.manifest, "JSON problem manifest");
  app.add_option("--matrix", f.matrix, "stoichiometric matrix (MatrixMarket coordinate)");
  app.add_option("--lower", f.lower, "lower bounds CSV (n rows, c columns)");
  app.add_option("--upper", f.upper, "upper bounds CSV");
  o.vlower = app.add_option("--vlower", f.vlower, "validation lower bounds CSV");
  auto* vupper = app.add_option("--vupper", f.vupper, "validation upper bounds CSV");
  o.vlower->needs(vupper);
  vupper->needs(o.vlower);
  o.name = app.add_option("--name", f.name, "dataset name for the report");
  o.round = app.add_option("--round", f.round, "round 1-5 (alias for the round subcommands)")->check(CLI::Range(1, 5));
  o.lambda = app.add_option("--lambda", f.lambda, "round 4 penalty");
  o.K = app.add_option("--K", f.K, "round 5 budget of freed columns");
  o.rule = app.add_option("--rule", f.rule, "weight rule: W1 | NW4 | NW4Random");
  o.epsilon = app.add_option("--epsilon", f.epsilon, "weight smoothing constant");
  o.p = app.add_option("--p", f.p, "NW4 exponent");
  o.iterations = app.add_option("--iterations", f.iterations, "reweighting iterations");
  o.seed = app.add_option("--seed", f.seed, "RNG seed for NW4Random")->envname("SPARSEFLUX_SEED");
  o.zero_tol = app.add_option("--zero-tol", f.zero_tol, "threshold below which a flux counts as zero");
  o.row_norm = app.add_option("--row-norm", f.row_norm, "row magnitude for joint weights: l2 | l1")
                   ->check(CLI::IsMember({"l1", "l2"}));
  o.backend = app.add_option("--backend", f.backend, "LP backend: simplex | simplex-bland");
  o.threads = app.add_option("--threads", f.threads, "worker threads for per-column solves")->envname("SPARSEFLUX_THREADS");
  app.add_flag("--no-preprocess", f.no_preprocess, "skip fixed-variable elimination");
  app.add_flag("--lower-bound", f.lower_bound, "compute the knockout sparsity lower bound");
  app.add_flag("--weighted-advantage", f.weighted_advantage, "compute d_j with the initial row weights");
  app.add_option("--out", f.out, "write the JSON output here instead of stdout");

  struct Verb {
    const char* name;
    const char* help;
    int round;
  };
  const Verb verbs[] = {{"feasibility", "round 1: find any steady-state flux", 1},
                        {"sparse", "round 2: sparsest single flux vector", 2},
                        {"joint", "round 3: jointly sparse flux matrix", 3},
                        {"penalized", "round 4: lambda-penalized relaxation", 4},
                        {"budgeted", "round 5: free at most K equations", 5}};
  std::vector<std::pair<CLI::App*, int>> round_cmds;
  for (const auto& v : verbs) round_cmds.emplace_back(app.add_subcommand(v.name, v.help)->fallthrough(), v.round);

  auto* validate_cmd = app.add_subcommand("validate", "re-check a report and score its support on validation bounds")
                           ->fallthrough();
  validate_cmd->add_option("--report", f.report, "report JSON to re-check");
  validate_cmd->add_option("--support", f.support_rows, "explicit support rows (0-based)")->delimiter(',');
  auto* bench_cmd = app.add_subcommand("bench", "time a round repeatedly")->fallthrough();
  bench_cmd->add_option("--samples", f.samples, "maximum number of samples")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--budget", f.budget, "time budget in seconds");
  bench_cmd->add_flag("--compare-preprocess", f.compare_preprocess, "also time without preprocessing");
  auto* oracle_cmd = app.add_subcommand("oracle", "exhaustive minimum support (small instances)")->fallthrough();
  oracle_cmd->add_option("--max-n", f.max_n, "refuse when n exceeds this");
  oracle_cmd->add_option("--max-c", f.max_c, "refuse when c exceeds this (budgeted)");

  CLI11_PARSE(app, argc, argv);

  try {
    bool round_chosen = o.round->count() > 0;
    for (auto& [cmd, round] : round_cmds) {
      if (!cmd->parsed()) continue;
      if (round_chosen && f.round != round)
        throw Error(ErrorKind::Config, std::string("--round disagrees with the '") + cmd->get_name() + "' command");
      f.round = round;
      round_chosen = true;
    }
    ProblemManifest manifest = build_manifest(f, o);
    if (round_chosen) manifest.round = f.round;
    const Problem problem = load_problem(manifest);

    if (validate_cmd->parsed()) {
      json out;
      SupportSet supp;
      bool ok = true;
      if (!f.report.empty()) {
        std::ifstream in(f.report);
        if (!in) throw Error(ErrorKind::Parse, "cannot open " + f.report);
        json j;
        try {
          in >> j;
        } catch (const json::exception& e) {
          throw Error(ErrorKind::Parse, f.report + ": " + e.what());
        }
        const ReconstructionReport report = report_from_json(j);
        const Revalidation check = revalidate(report, problem.model);
        out["revalidation"] = {{"ok", check.ok}, {"mismatches", check.mismatches}};
        ok = check.ok;
        supp.indices = report.support;
      }
      for (long i : f.support_rows) supp.indices.push_back(i);
      std::sort(supp.indices.begin(), supp.indices.end());
      supp.indices.erase(std::unique(supp.indices.begin(), supp.indices.end()), supp.indices.end());
      if (problem.validation) {
        const auto v = validate_infeasibility(problem.model.S, supp, *problem.validation, settings_for(manifest));
        out["validation"] = {{"scenarios", v.scenarios},
                             {"infeasible", v.infeasible},
                             {"feasible", v.feasible},
                             {"failed", v.failed},
                             {"percentage", v.percentage}};
        std::fprintf(stderr, "validation: %.2f%% of %ld scenarios infeasible\n", v.percentage,
                     static_cast<long>(v.scenarios));
      }
      out["support"] = supp.indices;
      emit(out, f.out);
      return ok ? 0 : exit_code(ErrorKind::Config);
    }

    if (bench_cmd->parsed()) {
      json out{{"dataset", problem.name}, {"round", manifest.round}};
      const TimingSummary t = bench(problem, manifest, f.samples, f.budget);
      out["timing"] = timing_json(t);
      std::fprintf(stderr, "%s round %d: %s\n", problem.name.c_str(), manifest.round, format_timing(t).c_str());
      if (f.compare_preprocess) {
        ProblemManifest raw = manifest;
        raw.preprocess = false;
        const TimingSummary tr = bench(problem, raw, f.samples, f.budget);
        out["timing_no_preprocess"] = timing_json(tr);
        std::fprintf(stderr, "%s round %d without preprocessing: %s\n", problem.name.c_str(), manifest.round,
                     format_timing(tr).c_str());
      }
      emit(out, f.out);
      return 0;
    }

    if (oracle_cmd->parsed()) {
      const SolverSettings settings = settings_for(manifest);
      const FluxModel& model = problem.model;
      OracleResult r;
      if (manifest.K && (o.K->count() || manifest.round == 5))
        r = brute_force_budgeted(model, *manifest.K, f.max_n, f.max_c, settings);
      else if (model.scenarios() == 1)
        r = brute_force_min_l0(model.S, model.bounds.lower(0), model.bounds.upper(0), f.max_n, settings);
      else r = brute_force_min_l20(model, f.max_n, settings);
      emit(oracle_json(r), f.out);
      std::fprintf(stderr, "oracle optimum: %ld (%ld LP solves)\n", static_cast<long>(r.optimum), r.solves);
      return 0;
    }

    if (!round_chosen && f.manifest.empty()) throw Error(ErrorKind::Config, "choose a round subcommand or --round");
    return run_report(problem, manifest, f.out);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code(ErrorKind::Numerical);
  }
}
