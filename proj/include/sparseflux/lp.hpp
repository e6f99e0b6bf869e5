#pragma once

// Solver-agnostic LP contract plus the two LP families every algorithm in
// this library reduces to: pure feasibility and weighted l1 minimization.

#include "sparseflux/model.hpp"

#include <memory>
#include <optional>
#include <string>

namespace sparseflux {

/// minimize c^T x  s.t.  A x = b,  lo <= x <= hi.  Infinite bounds are allowed.
struct LinearProgram {
  Vector objective;
  SparseMatrix A;
  Vector b;
  Vector lo;
  Vector hi;

  Index variables() const { return objective.size(); }
  Index constraints() const { return A.rows(); }
  /// Throws Error(Config) when the dimensions disagree.
  void validate() const;
};

struct SolveResult {
  SolveStatus status = SolveStatus::NumericalFailure;
  std::optional<Vector> x;
  std::optional<double> objective_value;
  long iterations = 0;

  bool optimal() const { return status == SolveStatus::Optimal; }
};

/// A pluggable LP engine. Implementations must be safe to call concurrently
/// from several threads; each call owns its working state.
class LpBackend {
 public:
  virtual ~LpBackend() = default;
  virtual SolveResult solve(const LinearProgram& lp) const = 0;
  virtual std::string name() const = 0;
};

/// Known names: "simplex" (default) and "simplex-bland".
std::shared_ptr<const LpBackend> make_backend(const std::string& name);
std::shared_ptr<const LpBackend> default_backend();

struct SolverSettings {
  std::shared_ptr<const LpBackend> backend;  // null selects default_backend()
  Tolerances tol;
  unsigned threads = 1;

  const LpBackend& lp() const;
};

/// Runs the backend and enforces the residual contract: an Optimal answer
/// whose residuals exceed the tolerances is downgraded to NumericalFailure.
/// Backend exceptions are also reported as NumericalFailure.
SolveResult solve_lp(const LinearProgram& lp, const SolverSettings& settings = {});

enum class Feasibility { Feasible, Infeasible, NumericalFailure };

/// Is there a v with S v = rhs and lower <= v <= upper?  `rhs` empty means zero.
Feasibility check_feasibility(const StoichiometricMatrix& S, const Vector& lower, const Vector& upper,
                              const SolverSettings& settings = {}, const Vector& rhs = {});

/// Same question, also returning the witness vector when one exists.
SolveResult find_feasible(const StoichiometricMatrix& S, const Vector& lower, const Vector& upper,
                          const SolverSettings& settings = {}, const Vector& rhs = {});

/// minimize sum_i w_i |v_i|  s.t.  lower <= v <= upper, and S v = rhs when
/// `enforce_equality` is set. The returned x is the recombined flux vector v.
SolveResult min_weighted_l1(const StoichiometricMatrix& S, const Vector& lower, const Vector& upper,
                            const Vector& weights, bool enforce_equality,
                            const SolverSettings& settings = {}, const Vector& rhs = {});

}  // namespace sparseflux
