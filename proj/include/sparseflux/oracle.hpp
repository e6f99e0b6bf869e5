#pragma once

// Exhaustive ground truth for small instances. Support sets are enumerated by
// increasing size (lexicographic within a size); the first size with a
// feasible candidate is optimal.

#include "sparseflux/lp.hpp"

namespace sparseflux {

struct OracleResult {
  Index optimum = 0;
  std::vector<SupportSet> witnesses;  // all optimal supports, in enumeration order
  long solves = 0;
};

/// min ||v||_0 s.t. S v = rhs, l <= v <= u.  Refuses when n > max_n.
/// Throws Error(Infeasible) if the instance has no feasible point at all.
OracleResult brute_force_min_l0(const StoichiometricMatrix& S, const Vector& lower, const Vector& upper,
                                Index max_n = 14, const SolverSettings& settings = {});

/// min ||V||_{2,0} s.t. S V = 0, L <= V <= U, with one row support shared by all columns.
OracleResult brute_force_min_l20(const FluxModel& model, Index max_n = 14, const SolverSettings& settings = {});

/// Same, but any set of at most K columns may drop their equality constraint.
OracleResult brute_force_budgeted(const FluxModel& model, Index K, Index max_n = 14, Index max_c = 6,
                                  const SolverSettings& settings = {});

}  // namespace sparseflux
