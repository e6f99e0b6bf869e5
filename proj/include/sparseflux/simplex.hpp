#pragma once

#include "sparseflux/lp.hpp"

namespace sparseflux {

/// Dense-tableau, bounded-variable, two-phase primal simplex.
///
/// Nonbasic variables sit at a finite bound (or at 0 when free). Phase one
/// minimizes the sum of one artificial per equality row; phase two fixes the
/// artificials to zero and minimizes the real objective. The basis is
/// refactored from the original columns periodically and before the answer
/// is reported, so returned residuals do not carry accumulated pivot error.
class BoundedSimplex final : public LpBackend {
 public:
  enum class Pricing { Dantzig, Bland };

  struct Options {
    Pricing pricing = Pricing::Dantzig;
    // Reduced costs above -optimality * max|c| count as nonnegative.
    double optimality = 1e-12;
    double pivot = 1e-9;
    double primal = 1e-9;
    int refactor_every = 50;
    // Consecutive degenerate pivots before Dantzig pricing falls back to Bland's rule.
    int degenerate_switch = 30;
    long max_iterations = 0;  // 0 picks 50 * (rows + columns) + 1000
  };

  BoundedSimplex() = default;
  explicit BoundedSimplex(Options options) : options_(options) {}

  SolveResult solve(const LinearProgram& lp) const override;
  std::string name() const override;

 private:
  Options options_;
};

}  // namespace sparseflux
