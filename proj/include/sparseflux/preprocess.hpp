#pragma once

// Data reductions applied before the sparse solvers: dropping variables whose
// bounds pin them to one value, spotting rows that can never be zero, and a
// knockout-based lower bound on the achievable joint support size.

#include "sparseflux/lp.hpp"

#include <vector>

namespace sparseflux {

struct ReducedProblem {
  FluxModel reduced;
  std::vector<Index> index_map;  // reduced row -> original row
  std::vector<std::pair<Index, double>> fixed;  // original row -> value in every scenario
  Index original_reactions = 0;

  /// Scatter a reduced n' x c solution back to n x c, filling fixed values.
  Matrix expand(const Matrix& reduced_values) const;
  /// Map reduced row indices back to original indices (stays sorted).
  std::vector<Index> to_original(std::span<const Index> reduced_rows) const;
  /// Map original indices to reduced ones, dropping eliminated rows.
  std::vector<Index> to_reduced(std::span<const Index> original_rows) const;
};

/// Remove every variable whose lower and upper bounds coincide, with the same
/// value in every scenario. Nonzero values are folded into the right-hand side.
ReducedProblem eliminate_fixed(const FluxModel& model);

/// Rows that cannot be zero in some scenario: lower > 0 or upper < 0.
std::vector<Index> forced_nonzero_rows(const BoundsSet& bounds);

struct LowerBoundResult {
  Index bound = 0;
  std::vector<Index> certified;  // rows proven nonzero in every feasible V (sorted)
  std::vector<Index> inconclusive;  // knockouts that ended in a numerical failure
  long solves = 0;
};

/// Lower bound on ||V||_{2,0}. Starts from the forced-nonzero rows and adds
/// every candidate row whose knockout (bounds set to [0, 0] in all scenarios)
/// makes some column infeasible. `enforced[j]` says whether column j keeps its
/// equality S v_j = 0; an empty mask enforces every column.
LowerBoundResult sparsity_lower_bound(const FluxModel& model, const SupportSet& candidate_support,
                                      const SolverSettings& settings = {},
                                      const std::vector<bool>& enforced = {});

}  // namespace sparseflux
