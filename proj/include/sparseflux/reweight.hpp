#pragma once

// Iteratively reweighted l1 minimization for sparse steady-state fluxes.

#include "sparseflux/lp.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace sparseflux {

enum class WeightRule { W1, NW4, NW4Random };

/// How a row of V is collapsed to one magnitude before the weight update.
enum class RowNorm { L2, L1 };

std::string_view to_string(WeightRule rule);
WeightRule parse_weight_rule(std::string_view name);

struct WeightRuleConfig {
  WeightRule rule = WeightRule::NW4;
  double epsilon = 1e-5;
  double p = 0.8;
  int iterations = 20;
  std::uint64_t seed = 0;  // NW4Random only
  RowNorm row_norm = RowNorm::L2;
  // Stop once this many consecutive iterates share a support (deterministic rules only); 0 disables.
  int stable_stop = 3;

  void validate() const;
};

/// w_i = 1 / (|v_i| + eps)
Vector update_weights_w1(const Vector& v, double epsilon);

/// w_i = (1 + (|v_i| + eps)^p) / (|v_i| + eps)^(p + 1)
Vector update_weights_nw4(const Vector& v, double epsilon, double p);

/// NW4 weights scaled by r_i^3 with r_i ~ Unif[0, 1) drawn from `rng`.
Vector update_weights_nw4_random(const Vector& v, double epsilon, double p, std::mt19937_64& rng);

/// w_i * r_i^3, the randomization step on its own.
Vector apply_random_factors(const Vector& weights, const Vector& r);

/// Uniform draw in [0, 1) from the top 53 bits of one engine output.
double unit_uniform(std::mt19937_64& rng);

/// Log merit sum_i log(|v_i| + eps). Its gradient at v > 0 is the W1 weight vector.
double merit_log(const Vector& v, double epsilon);

/// Row magnitudes ||v'_i|| used by the joint weight update.
Vector row_magnitudes(const Matrix& V, RowNorm norm);

struct IterationRecord {
  int iteration = 0;
  SupportSet support;
  double l1 = 0.0;                  // ||V||_{1,1}
  double weighted_objective = 0.0;  // sum_j sum_i w_i |V_ij| with the weights used for this solve
  double merit = 0.0;               // log merit of the row magnitudes over non-excluded rows
};

struct ReweightResult {
  FluxSolution solution;
  Index score = 0;  // |support(V, tol.zero)|
  double l1 = 0.0;
  int best_iteration = 0;
  bool numerical_warning = false;
  std::vector<IterationRecord> trace;
};

/// Feasibility only: any v with S v = rhs inside the box (c must be 1).
FluxSolution run_feasibility(const FluxModel& model, const SolverSettings& settings = {});

/// The shared reweighting loop. Each sweep solves one weighted l1 LP per column
/// (with S v_j = rhs only where `enforced[j]`), then recomputes row weights from
/// the row magnitudes. Rows in `excluded` carry weight 0 throughout. Returns the
/// iterate with the smallest support, ties broken by smaller l1 then earlier
/// iteration. Callers are responsible for feasibility pre-checks.
ReweightResult reweighted_l1(const FluxModel& model, const std::vector<bool>& enforced,
                             const WeightRuleConfig& config, std::span<const Index> excluded,
                             const SolverSettings& settings = {});

/// Minimum-cardinality heuristic for a single flux vector (c = 1).
/// Throws Error(Infeasible) when no steady state exists inside the box.
ReweightResult sparse_flux(const FluxModel& model, const WeightRuleConfig& config,
                           std::span<const Index> excluded, const SolverSettings& settings = {});

}  // namespace sparseflux
