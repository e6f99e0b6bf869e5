#include "sparseflux/rounds.hpp"

#include "sparseflux/errors.hpp"
#include "sparseflux/io.hpp"
#include "sparseflux/preprocess.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

namespace sparseflux {

using nlohmann::json;

void ProblemManifest::validate() const {
  if (round < 1 || round > 5) throw Error(ErrorKind::Config, "round must be between 1 and 5");
  if (round == 4 && !lambda) throw Error(ErrorKind::Config, "round 4 requires lambda");
  if (round == 5 && !K) throw Error(ErrorKind::Config, "round 5 requires K");
  if (lambda && !(*lambda >= 0.0)) throw Error(ErrorKind::Config, "lambda must be nonnegative");
  if (K && *K < 0) throw Error(ErrorKind::Config, "K must be nonnegative");
  if (validation_lower.has_value() != validation_upper.has_value())
    throw Error(ErrorKind::Config, "validation bounds need both lower and upper files");
  if (iterations && *iterations < 1) throw Error(ErrorKind::Config, "iterations must be at least 1");
  config.validate();
}

ProblemManifest manifest_from_json(const json& j, const std::filesystem::path& base_dir) {
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
  };
  try {
    ProblemManifest m;
    m.name = j.value("name", std::string());
    m.matrix = resolve(j.at("matrix").get<std::string>());
    m.lower = resolve(j.at("lower").get<std::string>());
    m.upper = resolve(j.at("upper").get<std::string>());
    if (j.contains("validation_lower") && !j.at("validation_lower").is_null())
      m.validation_lower = resolve(j.at("validation_lower").get<std::string>());
    if (j.contains("validation_upper") && !j.at("validation_upper").is_null())
      m.validation_upper = resolve(j.at("validation_upper").get<std::string>());
    m.round = j.value("round", 2);
    if (j.contains("lambda") && !j.at("lambda").is_null()) m.lambda = j.at("lambda").get<double>();
    if (j.contains("K") && !j.at("K").is_null()) m.K = j.at("K").get<Index>();
    if (j.contains("config")) {
      m.config = config_from_json(j.at("config"));
      if (j.at("config").contains("iterations")) m.iterations = m.config.iterations;
    }
    if (j.contains("iterations")) m.iterations = j.at("iterations").get<int>();
    if (j.contains("tolerances")) m.tol = tolerances_from_json(j.at("tolerances"));
    m.preprocess = j.value("preprocess", true);
    m.lower_bound = j.value("lower_bound", false);
    m.weighted_advantage = j.value("weighted_advantage", false);
    m.backend = j.value("backend", std::string("simplex"));
    m.threads = j.value("threads", 0u);
    if (m.name.empty()) m.name = m.matrix.stem().string();
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, std::string("malformed manifest: ") + e.what());
  }
}

ProblemManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
  }
  return manifest_from_json(j, path.parent_path());
}

json manifest_to_json(const ProblemManifest& m) {
  json j;
  j["name"] = m.name;
  j["matrix"] = m.matrix.string();
  j["lower"] = m.lower.string();
  j["upper"] = m.upper.string();
  if (m.validation_lower) j["validation_lower"] = m.validation_lower->string();
  if (m.validation_upper) j["validation_upper"] = m.validation_upper->string();
  j["round"] = m.round;
  if (m.lambda) j["lambda"] = *m.lambda;
  if (m.K) j["K"] = *m.K;
  j["config"] = config_to_json(m.config);
  if (m.iterations) j["iterations"] = *m.iterations;
  else j["config"].erase("iterations");
  j["tolerances"] = tolerances_to_json(m.tol);
  j["preprocess"] = m.preprocess;
  j["lower_bound"] = m.lower_bound;
  j["weighted_advantage"] = m.weighted_advantage;
  j["backend"] = m.backend;
  j["threads"] = m.threads;
  return j;
}

Problem load_problem(const ProblemManifest& manifest) {
  Problem p;
  p.name = manifest.name;
  StoichiometricMatrix S = read_matrix_market(manifest.matrix);
  BoundsSet bounds = read_bounds(manifest.lower, manifest.upper);
  if (bounds.rows() != S.cols()) {
    std::ostringstream os;
    os << manifest.lower.string() << ": expected " << S.cols() << " bound rows (one per reaction), found "
       << bounds.rows();
    throw Error(ErrorKind::Parse, os.str());
  }
  p.model = FluxModel(std::move(S), std::move(bounds));
  if (manifest.validation_lower && manifest.validation_upper) {
    BoundsSet v = read_bounds(*manifest.validation_lower, *manifest.validation_upper);
    if (v.rows() != p.model.reactions()) {
      std::ostringstream os;
      os << manifest.validation_lower->string() << ": expected " << p.model.reactions() << " rows, found " << v.rows();
      throw Error(ErrorKind::Parse, os.str());
    }
    p.validation = std::move(v);
  }
  return p;
}

SolverSettings settings_for(const ProblemManifest& manifest) {
  SolverSettings s;
  s.backend = make_backend(manifest.backend);
  s.tol = manifest.tol;
  s.threads = manifest.threads ? manifest.threads : std::max(1u, std::thread::hardware_concurrency());
  return s;
}

namespace {

ReducedProblem identity_reduction(const FluxModel& model) {
  ReducedProblem r;
  r.reduced = model;
  r.original_reactions = model.reactions();
  r.index_map.resize(static_cast<std::size_t>(model.reactions()));
  std::iota(r.index_map.begin(), r.index_map.end(), Index{0});
  return r;
}

std::vector<Index> merge_sorted(std::vector<Index> a, const std::vector<Index>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

}  // namespace

ReconstructionReport run_round(const Problem& problem, const ProblemManifest& manifest) {
  manifest.validate();
  const FluxModel& model = problem.model;
  const SolverSettings settings = settings_for(manifest);
  WeightRuleConfig config = manifest.config;
  config.iterations = manifest.iterations.value_or(default_iterations(model.reactions(), model.scenarios()));

  ReconstructionReport report;
  report.dataset = problem.name;
  report.round = manifest.round;
  report.m = model.metabolites();
  report.n = model.reactions();
  report.c = model.scenarios();
  report.backend = settings.lp().name();
  report.tol = manifest.tol;
  report.config = config;
  report.preprocess = manifest.preprocess;
  report.lambda = manifest.lambda;
  report.K = manifest.K;

  const auto start = std::chrono::steady_clock::now();
  const ReducedProblem reduction = manifest.preprocess ? eliminate_fixed(model) : identity_reduction(model);
  const FluxModel& working = reduction.reduced;

  FluxSolution solution;
  if (manifest.round == 1) {
    const FluxSolution reduced = run_feasibility(working, settings);
    solution.values = reduction.expand(reduced.values);
    solution.status = reduced.status;
    report.status = reduced.status[0] == SolveStatus::Optimal ? "feasible"
                    : reduced.status[0] == SolveStatus::Infeasible ? "infeasible"
                                                                   : "numerical_failure";
  } else {
    if (manifest.round == 2 && model.scenarios() != 1)
      throw Error(ErrorKind::Config, "round 2 expects a single bound column");
    ConstraintSelection selection = ConstraintSelection::all(working.scenarios());
    if (manifest.round == 4 || manifest.round == 5) {
      Vector w;
      if (manifest.weighted_advantage) {
        w = Vector::Ones(working.reactions());
        for (Index i : forced_nonzero_rows(working.bounds)) w(i) = 0.0;
      }
      const Vector d = column_advantages(working, w, settings);
      selection = manifest.round == 4 ? select_penalized(d, *manifest.lambda) : select_budgeted(d, *manifest.K);
    }

    std::vector<Index> excluded = forced_nonzero_rows(working.bounds);
    ReweightResult result = manifest.round == 2 ? sparse_flux(working, config, excluded, settings)
                                                : joint_sparse(working, selection, config, excluded, settings);

    if (manifest.lower_bound) {
      const LowerBoundResult lb = sparsity_lower_bound(working, support(result.solution.values, manifest.tol.zero),
                                                       settings, selection.enforced);
      Index fixed_nonzero = 0;
      for (const auto& f : reduction.fixed) fixed_nonzero += f.second != 0.0 ? 1 : 0;
      report.lower_bound = lb.bound + fixed_nonzero;
      // Certified rows are nonzero in every feasible V; rerun with them unweighted.
      const std::vector<Index> widened = merge_sorted(excluded, lb.certified);
      if (widened != excluded) {
        ReweightResult again = manifest.round == 2 ? sparse_flux(working, config, widened, settings)
                                                   : joint_sparse(working, selection, config, widened, settings);
        if (again.score < result.score) result = std::move(again);
      }
    }

    solution.values = reduction.expand(result.solution.values);
    solution.status = result.solution.status;
    report.status = "solved";
    report.best_iteration = result.best_iteration;
    report.iterations_run = static_cast<int>(result.trace.size());
    report.numerical_warning = result.numerical_warning;
    report.freed_columns = selection.freed_columns();
    report.advantage.assign(selection.advantage.data(), selection.advantage.data() + selection.advantage.size());
  }
  const auto stop = std::chrono::steady_clock::now();
  report.timing = TimingSummary{1, std::chrono::duration<double>(stop - start).count(), 0.0};

  compute_residuals(model, solution);
  report.solution = solution.values;
  for (SolveStatus s : solution.status) report.column_status.emplace_back(to_string(s));
  report.residuals = solution.equality_residual;
  const SupportSet supp = support(solution.values, manifest.tol.zero);
  report.support = supp.indices;
  report.score = manifest.round == 1 ? 0 : static_cast<Index>(supp.size());
  report.l1 = solution.values.cwiseAbs().sum();
  report.nonzero_equality_columns = nonzero_equality_columns(model.S, solution.values, manifest.tol.zero);
  if (manifest.round == 4) report.penalized_objective = penalized_objective(solution.values, model.S, *manifest.lambda);

  if (manifest.round == 5 && problem.validation) {
    const ValidationResult v = validate_infeasibility(model.S, supp, *problem.validation, settings);
    report.validation = ValidationSummary{v.scenarios, v.infeasible, v.feasible, v.failed, v.percentage};
  }
  return report;
}

TimingSummary bench(const Problem& problem, const ProblemManifest& manifest, long samples, double budget_seconds) {
  if (samples < 1) throw Error(ErrorKind::Config, "samples must be at least 1");
  std::vector<double> times;
  const auto start = std::chrono::steady_clock::now();
  while (static_cast<long>(times.size()) < samples) {
    times.push_back(run_round(problem, manifest).timing.mean_seconds);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed >= budget_seconds) break;
  }
  TimingSummary t;
  t.samples = static_cast<long>(times.size());
  t.mean_seconds = std::accumulate(times.begin(), times.end(), 0.0) / static_cast<double>(t.samples);
  if (t.samples > 1) {
    double ss = 0.0;
    for (double x : times) ss += (x - t.mean_seconds) * (x - t.mean_seconds);
    t.std_seconds = std::sqrt(ss / static_cast<double>(t.samples - 1));
  }
  return t;
}

}  // namespace sparseflux
