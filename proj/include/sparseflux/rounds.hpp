#pragma once

// Round drivers: load a dataset described by a manifest, run one of the five
// reconstruction rounds, and summarize the outcome as a report.

#include "sparseflux/joint.hpp"
#include "sparseflux/report.hpp"

#include <filesystem>
#include <optional>

namespace sparseflux {

struct ProblemManifest {
  std::string name;
  std::filesystem::path matrix;
  std::filesystem::path lower;
  std::filesystem::path upper;
  std::optional<std::filesystem::path> validation_lower;
  std::optional<std::filesystem::path> validation_upper;
  int round = 2;
  std::optional<double> lambda;
  std::optional<Index> K;
  WeightRuleConfig config;
  std::optional<int> iterations;  // unset: default_iterations(n, c)
  Tolerances tol;
  bool preprocess = true;
  bool lower_bound = false;
  bool weighted_advantage = false;
  std::string backend = "simplex";
  unsigned threads = 0;  // 0: hardware concurrency

  /// Round-consistency checks: round 4 needs lambda, round 5 needs K.
  void validate() const;
};

/// Reads a JSON manifest; relative paths resolve against the manifest's directory.
ProblemManifest load_manifest(const std::filesystem::path& path);
ProblemManifest manifest_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::json manifest_to_json(const ProblemManifest& manifest);

struct Problem {
  std::string name;
  FluxModel model;
  std::optional<BoundsSet> validation;
};

/// Loads S and bounds and cross-checks their dimensions.
Problem load_problem(const ProblemManifest& manifest);

/// Runs one round. Wall time covers preprocessing and solving, not file I/O.
/// Round 1 reports infeasibility through `status`; later rounds throw
/// Error(Infeasible) when a required steady state does not exist.
ReconstructionReport run_round(const Problem& problem, const ProblemManifest& manifest);

/// Repeats run_round up to `samples` times or until `budget_seconds` have
/// elapsed, always taking at least one sample.
TimingSummary bench(const Problem& problem, const ProblemManifest& manifest, long samples, double budget_seconds);

SolverSettings settings_for(const ProblemManifest& manifest);

}  // namespace sparseflux
