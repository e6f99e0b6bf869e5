#pragma once

#include "sparseflux/reweight.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace sparseflux {

struct TimingSummary {
  long samples = 0;
  double mean_seconds = 0.0;
  double std_seconds = 0.0;  // sample standard deviation; 0 for a single sample
  bool single_sample() const { return samples == 1; }
};

/// "3.221 ± 0.505 ms", "14.96 ± 0.15 s", or "640* s" for a single sample.
std::string format_timing(const TimingSummary& t);

struct ValidationSummary {
  Index scenarios = 0;
  Index infeasible = 0;
  Index feasible = 0;
  Index failed = 0;
  double percentage = 0.0;
};

struct ReconstructionReport {
  std::string dataset;
  int round = 0;
  Index m = 0, n = 0, c = 0;
  std::string status;  // "feasible" / "infeasible" for round 1, "solved" otherwise
  Index score = 0;
  double l1 = 0.0;
  std::vector<Index> support;
  std::vector<Index> freed_columns;
  std::vector<Index> nonzero_equality_columns;
  std::vector<double> advantage;
  std::optional<double> lambda;
  std::optional<Index> K;
  std::optional<double> penalized_objective;
  std::optional<ValidationSummary> validation;
  std::optional<Index> lower_bound;
  TimingSummary timing;
  std::string backend;
  Tolerances tol;
  WeightRuleConfig config;
  bool preprocess = true;
  int best_iteration = 0;
  int iterations_run = 0;
  bool numerical_warning = false;
  Matrix solution;  // n x c
  std::vector<std::string> column_status;
  std::vector<double> residuals;
};

nlohmann::json to_json(const ReconstructionReport& report);
ReconstructionReport report_from_json(const nlohmann::json& j);

nlohmann::json config_to_json(const WeightRuleConfig& config);
WeightRuleConfig config_from_json(const nlohmann::json& j, WeightRuleConfig base = {});
nlohmann::json tolerances_to_json(const Tolerances& tol);
Tolerances tolerances_from_json(const nlohmann::json& j, Tolerances base = {});

struct Revalidation {
  bool ok = true;
  std::vector<std::string> mismatches;
};

/// Recomputes score, support, residuals and the nonzero-equality columns from
/// the stored solution and compares them with the stored values exactly.
Revalidation revalidate(const ReconstructionReport& report, const FluxModel& model);

}  // namespace sparseflux
