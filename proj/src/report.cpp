#include "sparseflux/report.hpp"

#include "sparseflux/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace sparseflux {

using nlohmann::json;

std::string format_timing(const TimingSummary& t) {
  char buf[96];
  if (t.single_sample()) {
    if (t.mean_seconds < 1.0) std::snprintf(buf, sizeof buf, "%.4g* ms", t.mean_seconds * 1e3);
    else std::snprintf(buf, sizeof buf, "%.4g* s", t.mean_seconds);
    return buf;
  }
  if (t.mean_seconds < 1.0) std::snprintf(buf, sizeof buf, "%.4g ± %.3g ms", t.mean_seconds * 1e3, t.std_seconds * 1e3);
  else std::snprintf(buf, sizeof buf, "%.4g ± %.3g s", t.mean_seconds, t.std_seconds);
  return buf;
}

json config_to_json(const WeightRuleConfig& config) {
  return json{{"rule", std::string(to_string(config.rule))},
              {"epsilon", config.epsilon},
              {"p", config.p},
              {"iterations", config.iterations},
              {"seed", config.seed},
              {"row_norm", config.row_norm == RowNorm::L2 ? "l2" : "l1"},
              {"stable_stop", config.stable_stop}};
}

WeightRuleConfig config_from_json(const json& j, WeightRuleConfig base) {
  if (!j.is_object()) throw Error(ErrorKind::Config, "config must be a JSON object");
  if (j.contains("rule")) base.rule = parse_weight_rule(j.at("rule").get<std::string>());
  if (j.contains("epsilon")) base.epsilon = j.at("epsilon").get<double>();
  if (j.contains("p")) base.p = j.at("p").get<double>();
  if (j.contains("iterations")) base.iterations = j.at("iterations").get<int>();
  if (j.contains("seed")) base.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("stable_stop")) base.stable_stop = j.at("stable_stop").get<int>();
  if (j.contains("row_norm")) {
    const auto s = j.at("row_norm").get<std::string>();
    if (s == "l2") base.row_norm = RowNorm::L2;
    else if (s == "l1") base.row_norm = RowNorm::L1;
    else throw Error(ErrorKind::Config, "row_norm must be 'l1' or 'l2'");
  }
  return base;
}

json tolerances_to_json(const Tolerances& tol) {
  return json{{"zero", tol.zero}, {"feasibility", tol.feasibility}, {"bound", tol.bound}};
}

Tolerances tolerances_from_json(const json& j, Tolerances base) {
  if (j.contains("zero")) base.zero = j.at("zero").get<double>();
  if (j.contains("feasibility")) base.feasibility = j.at("feasibility").get<double>();
  if (j.contains("bound")) base.bound = j.at("bound").get<double>();
  return base;
}

namespace {

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double null_as_inf(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

}  // namespace

json to_json(const ReconstructionReport& r) {
  json j;
  j["dataset"] = r.dataset;
  j["round"] = r.round;
  j["m"] = r.m;
  j["n"] = r.n;
  j["c"] = r.c;
  j["status"] = r.status;
  j["score"] = r.score;
  j["l1"] = r.l1;
  j["support"] = r.support;
  j["freed_columns"] = r.freed_columns;
  j["nonzero_equality_columns"] = r.nonzero_equality_columns;
  json adv = json::array();
  for (double d : r.advantage) adv.push_back(finite_or_null(d));
  j["advantage"] = adv;
  j["lambda"] = r.lambda ? json(*r.lambda) : json(nullptr);
  j["K"] = r.K ? json(*r.K) : json(nullptr);
  j["penalized_objective"] = r.penalized_objective ? json(*r.penalized_objective) : json(nullptr);
  if (r.validation) {
    j["validation"] = {{"scenarios", r.validation->scenarios},
                       {"infeasible", r.validation->infeasible},
                       {"feasible", r.validation->feasible},
                       {"failed", r.validation->failed},
                       {"percentage", r.validation->percentage}};
  } else {
    j["validation"] = nullptr;
  }
  j["lower_bound"] = r.lower_bound ? json(*r.lower_bound) : json(nullptr);
  j["timing"] = {{"samples", r.timing.samples},
                 {"mean_seconds", r.timing.mean_seconds},
                 {"std_seconds", r.timing.std_seconds},
                 {"formatted", format_timing(r.timing)}};
  j["backend"] = r.backend;
  j["tolerances"] = tolerances_to_json(r.tol);
  j["config"] = config_to_json(r.config);
  j["preprocess"] = r.preprocess;
  j["best_iteration"] = r.best_iteration;
  j["iterations_run"] = r.iterations_run;
  j["numerical_warning"] = r.numerical_warning;
  json rows = json::array();
  for (Index i = 0; i < r.solution.rows(); ++i) {
    json row = json::array();
    for (Index k = 0; k < r.solution.cols(); ++k) row.push_back(r.solution(i, k));
    rows.push_back(std::move(row));
  }
  j["solution"] = rows;
  j["column_status"] = r.column_status;
  j["residuals"] = r.residuals;
  return j;
}

ReconstructionReport report_from_json(const json& j) {
  try {
    ReconstructionReport r;
    r.dataset = j.at("dataset").get<std::string>();
    r.round = j.at("round").get<int>();
    r.m = j.at("m").get<Index>();
    r.n = j.at("n").get<Index>();
    r.c = j.at("c").get<Index>();
    r.status = j.at("status").get<std::string>();
    r.score = j.at("score").get<Index>();
    r.l1 = j.at("l1").get<double>();
    r.support = j.at("support").get<std::vector<Index>>();
    r.freed_columns = j.at("freed_columns").get<std::vector<Index>>();
    r.nonzero_equality_columns = j.at("nonzero_equality_columns").get<std::vector<Index>>();
    for (const auto& d : j.at("advantage")) r.advantage.push_back(null_as_inf(d));
    if (!j.at("lambda").is_null()) r.lambda = j.at("lambda").get<double>();
    if (!j.at("K").is_null()) r.K = j.at("K").get<Index>();
    if (!j.at("penalized_objective").is_null()) r.penalized_objective = j.at("penalized_objective").get<double>();
    if (!j.at("validation").is_null()) {
      const auto& v = j.at("validation");
      r.validation = ValidationSummary{v.at("scenarios").get<Index>(), v.at("infeasible").get<Index>(),
                                       v.at("feasible").get<Index>(), v.at("failed").get<Index>(),
                                       v.at("percentage").get<double>()};
    }
    if (!j.at("lower_bound").is_null()) r.lower_bound = j.at("lower_bound").get<Index>();
    const auto& t = j.at("timing");
    r.timing = TimingSummary{t.at("samples").get<long>(), t.at("mean_seconds").get<double>(),
                             t.at("std_seconds").get<double>()};
    r.backend = j.at("backend").get<std::string>();
    r.tol = tolerances_from_json(j.at("tolerances"));
    r.config = config_from_json(j.at("config"));
    r.preprocess = j.at("preprocess").get<bool>();
    r.best_iteration = j.at("best_iteration").get<int>();
    r.iterations_run = j.at("iterations_run").get<int>();
    r.numerical_warning = j.at("numerical_warning").get<bool>();
    const auto& rows = j.at("solution");
    r.solution = Matrix::Zero(static_cast<Index>(rows.size()), r.c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (static_cast<Index>(rows[i].size()) != r.c) throw Error(ErrorKind::Parse, "solution row has wrong length");
      for (std::size_t k = 0; k < rows[i].size(); ++k)
        r.solution(static_cast<Index>(i), static_cast<Index>(k)) = rows[i][k].get<double>();
    }
    r.column_status = j.at("column_status").get<std::vector<std::string>>();
    r.residuals = j.at("residuals").get<std::vector<double>>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("malformed report: ") + e.what());
  }
}

Revalidation revalidate(const ReconstructionReport& report, const FluxModel& model) {
  Revalidation out;
  auto fail = [&](std::string msg) {
    out.ok = false;
    out.mismatches.push_back(std::move(msg));
  };
  if (report.solution.rows() != model.reactions() || report.solution.cols() != model.scenarios()) {
    fail("solution shape does not match the model");
    return out;
  }
  const SupportSet supp = support(report.solution, report.tol.zero);
  if (report.round != 1 && static_cast<Index>(supp.size()) != report.score) fail("score differs from |support|");
  if (supp.indices != report.support) fail("support differs");

  FluxSolution sol;
  sol.values = report.solution;
  compute_residuals(model, sol);
  if (sol.equality_residual != report.residuals) fail("residuals differ");

  const auto nonzero = nonzero_equality_columns(model.S, report.solution, report.tol.zero);
  if (nonzero != report.nonzero_equality_columns) fail("nonzero equality columns differ");
  for (Index j : nonzero)
    if (std::find(report.freed_columns.begin(), report.freed_columns.end(), j) == report.freed_columns.end())
      fail("column " + std::to_string(j) + " violates S v = 0 but was not freed");
  return out;
}

}  // namespace sparseflux
