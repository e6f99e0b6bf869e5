#pragma once

// Jointly sparse reconstruction across scenarios, with optional relaxation of
// some steady-state equations and an infeasibility-based validation score.

#include "sparseflux/reweight.hpp"

#include <limits>
#include <variant>

namespace sparseflux {

struct SelectAll {};
struct Penalized {
  double lambda;
};
struct Budgeted {
  Index K;
};
using SelectionMode = std::variant<SelectAll, Penalized, Budgeted>;

/// Which scenario columns keep S v_j = 0 (the set J), and the advantages that chose them.
struct ConstraintSelection {
  std::vector<bool> enforced;  // enforced[j] <=> j in J
  Vector advantage;            // d_j; empty for SelectAll
  SelectionMode mode = SelectAll{};

  static ConstraintSelection all(Index c);
  std::vector<Index> enforced_columns() const;
  std::vector<Index> freed_columns() const;
};

/// d_j = min{sum w_i|v_i| : S v = rhs, box} - min{sum w_i|v_i| : box}.
/// Returns +infinity when the constrained problem is infeasible.
/// Throws Error(Numerical) naming `column` if either LP fails.
double column_advantage(const StoichiometricMatrix& S, const Vector& lower, const Vector& upper,
                        const Vector& weights, Index column = 0, const SolverSettings& settings = {},
                        const Vector& rhs = {});

/// d_j for every column of the model; `weights` empty means plain l1.
Vector column_advantages(const FluxModel& model, const Vector& weights = {}, const SolverSettings& settings = {});

/// J = {j : d_j < lambda}.
ConstraintSelection select_penalized(const Vector& advantage, double lambda);

/// Frees the K columns with the largest d_j (ties go to the lower index).
ConstraintSelection select_budgeted(const Vector& advantage, Index K);

/// Round-style iteration defaults: 20 for a single column, 10 for ordinary
/// multi-column sizes, 5 once n * c reaches `large_threshold`.
int default_iterations(Index reactions, Index scenarios, Index large_threshold = 2'000'000);

/// Reweighted l1,1 minimization with row weights shared across columns.
/// Every enforced column is checked for feasibility first; an infeasible one
/// raises Error(Infeasible) naming it.
ReweightResult joint_sparse(const FluxModel& model, const ConstraintSelection& selection,
                            const WeightRuleConfig& config, std::span<const Index> excluded,
                            const SolverSettings& settings = {});

/// ||V||_{2,1} + lambda * ||(S V - rhs 1^T)^T||_{2,1}
double penalized_objective(const Matrix& V, const StoichiometricMatrix& S, double lambda);

struct ValidationResult {
  Index scenarios = 0;
  Index infeasible = 0;
  Index feasible = 0;
  Index failed = 0;  // numerical failures, counted in neither bucket
  double percentage = 0.0;  // 100 * infeasible / scenarios
  std::vector<Feasibility> outcomes;
};

/// For each validation scenario k, is S^I v = 0 with lower_k^I <= v <= upper_k^I feasible?
/// Reports the share of infeasible scenarios.
ValidationResult validate_infeasibility(const StoichiometricMatrix& S, const SupportSet& support_rows,
                                        const BoundsSet& validation_bounds, const SolverSettings& settings = {});

}  // namespace sparseflux
