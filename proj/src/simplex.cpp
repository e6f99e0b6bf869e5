#include "sparseflux/simplex.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>

namespace sparseflux {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class VarState { Basic, AtLower, AtUpper, FreeZero };

enum class PhaseOutcome { Optimal, Unbounded, IterationLimit, Singular };

// Working state for one solve. Columns [0, n) are structural, [n, n + m) are
// one artificial per row with coefficient sign_[i] in row i.
class Tableau {
 public:
  Tableau(const LinearProgram& lp, const BoundedSimplex::Options& opt) : opt_(opt) {
    m_ = lp.constraints();
    n_ = lp.variables();
    total_ = n_ + m_;
    b_ = lp.b;

    lo_.resize(total_);
    hi_.resize(total_);
    lo_.head(n_) = lp.lo;
    hi_.head(n_) = lp.hi;
    lo_.tail(m_).setZero();
    hi_.tail(m_).setConstant(kInf);

    x_ = Vector::Zero(total_);
    state_.assign(static_cast<std::size_t>(total_), VarState::AtLower);
    for (Index j = 0; j < n_; ++j) {
      if (std::isfinite(lo_(j))) {
        x_(j) = lo_(j);
        state_[j] = VarState::AtLower;
      } else if (std::isfinite(hi_(j))) {
        x_(j) = hi_(j);
        state_[j] = VarState::AtUpper;
      } else {
        x_(j) = 0.0;
        state_[j] = VarState::FreeZero;
      }
    }

    const Vector residual = lp.b - lp.A * x_.head(n_);
    sign_.resize(m_);
    for (Index i = 0; i < m_; ++i) sign_(i) = residual(i) >= 0.0 ? 1.0 : -1.0;

    // Dense copy of [A | diag(sign)] used for refactorization.
    full_ = Matrix::Zero(m_, total_);
    full_.leftCols(n_) = Matrix(lp.A);
    for (Index i = 0; i < m_; ++i) full_(i, n_ + i) = sign_(i);

    tab_ = RowMatrix(m_, total_);
    for (Index i = 0; i < m_; ++i) tab_.row(i) = sign_(i) * full_.row(i);
    basis_.resize(static_cast<std::size_t>(m_));
    for (Index i = 0; i < m_; ++i) {
      basis_[i] = n_ + i;
      state_[n_ + i] = VarState::Basic;
      x_(n_ + i) = std::abs(residual(i));
    }
  }

  PhaseOutcome run(const Vector& cost, long& iterations, long max_iterations) {
    double cost_scale = 0.0;
    for (Index j = 0; j < total_; ++j)
      if (lo_(j) < hi_(j)) cost_scale = std::max(cost_scale, std::abs(cost(j)));
    const double opt_tol = opt_.optimality * cost_scale;

    int degenerate_run = 0;
    int since_refactor = 0;
    Vector cb(m_);
    while (true) {
      if (iterations >= max_iterations) return PhaseOutcome::IterationLimit;

      for (Index i = 0; i < m_; ++i) cb(i) = cost(basis_[i]);
      const Vector reduced = cost - tab_.transpose() * cb;

      const bool bland = opt_.pricing == BoundedSimplex::Pricing::Bland || degenerate_run >= opt_.degenerate_switch;
      Index entering = -1;
      double direction = 0.0;
      double best = 0.0;
      for (Index j = 0; j < total_; ++j) {
        const VarState s = state_[j];
        if (s == VarState::Basic || !(lo_(j) < hi_(j))) continue;
        const double d = reduced(j);
        double dir = 0.0;
        if (d < -opt_tol && (s == VarState::AtLower || s == VarState::FreeZero)) dir = 1.0;
        else if (d > opt_tol && (s == VarState::AtUpper || s == VarState::FreeZero)) dir = -1.0;
        if (dir == 0.0) continue;
        if (bland) {
          entering = j;
          direction = dir;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          entering = j;
          direction = dir;
        }
      }
      if (entering < 0) return PhaseOutcome::Optimal;

      // Ratio test. Basic variable i moves by -theta * direction * tab(i, entering).
      double theta = kInf;
      Index leave_row = -1;
      bool leave_to_lower = true;
      for (Index i = 0; i < m_; ++i) {
        const double alpha = direction * tab_(i, entering);
        if (std::abs(alpha) <= opt_.pivot) continue;
        const Index var = basis_[i];
        double limit;
        bool to_lower;
        if (alpha > 0.0) {
          if (!std::isfinite(lo_(var))) continue;
          limit = std::max(0.0, (x_(var) - lo_(var)) / alpha);
          to_lower = true;
        } else {
          if (!std::isfinite(hi_(var))) continue;
          limit = std::max(0.0, (hi_(var) - x_(var)) / -alpha);
          to_lower = false;
        }
        bool take = false;
        if (leave_row < 0 || limit < theta - 1e-12 * std::max(1.0, theta)) {
          take = true;
        } else if (limit <= theta + 1e-12 * std::max(1.0, theta)) {
          take = bland ? var < basis_[leave_row]
                       : std::abs(alpha) > std::abs(tab_(leave_row, entering));
        }
        if (take) {
          theta = limit;
          leave_row = i;
          leave_to_lower = to_lower;
        }
      }

      const double span = hi_(entering) - lo_(entering);
      const bool flip = std::isfinite(span) && span <= theta;
      if (!flip && leave_row < 0) return PhaseOutcome::Unbounded;
      const double step = flip ? span : theta;

      ++iterations;
      degenerate_run = step <= 1e-12 ? degenerate_run + 1 : 0;

      for (Index i = 0; i < m_; ++i) x_(basis_[i]) -= step * direction * tab_(i, entering);
      x_(entering) += step * direction;

      if (flip) {
        if (direction > 0) {
          state_[entering] = VarState::AtUpper;
          x_(entering) = hi_(entering);
        } else {
          state_[entering] = VarState::AtLower;
          x_(entering) = lo_(entering);
        }
        continue;
      }

      const Index leaving = basis_[leave_row];
      state_[leaving] = leave_to_lower ? VarState::AtLower : VarState::AtUpper;
      x_(leaving) = leave_to_lower ? lo_(leaving) : hi_(leaving);
      state_[entering] = VarState::Basic;
      basis_[leave_row] = entering;
      pivot(leave_row, entering);

      if (++since_refactor >= opt_.refactor_every) {
        since_refactor = 0;
        if (!refactor()) return PhaseOutcome::Singular;
      }
    }
  }

  // Rebuilds the tableau and basic values from the original columns.
  bool refactor() {
    if (m_ == 0) return true;
    Matrix B(m_, m_);
    for (Index i = 0; i < m_; ++i) B.col(i) = full_.col(basis_[i]);
    Eigen::FullPivLU<Matrix> lu(B);
    if (!lu.isInvertible()) return false;
    tab_ = lu.solve(full_);
    Vector rhs = b_;
    for (Index j = 0; j < total_; ++j)
      if (state_[j] != VarState::Basic && x_(j) != 0.0) rhs -= x_(j) * full_.col(j);
    const Vector xb = lu.solve(rhs);
    for (Index i = 0; i < m_; ++i) x_(basis_[i]) = xb(i);
    return tab_.allFinite() && xb.allFinite();
  }

  double artificial_sum() const { return x_.tail(m_).sum(); }

  // Phase two: artificials are pinned at zero and never re-enter.
  void close_artificials() {
    for (Index i = 0; i < m_; ++i) {
      const Index a = n_ + i;
      hi_(a) = 0.0;
      if (state_[a] != VarState::Basic) {
        state_[a] = VarState::AtLower;
        x_(a) = 0.0;
      }
    }
  }

  Vector structural() const { return x_.head(n_); }
  Index total() const { return total_; }
  Index structural_count() const { return n_; }

 private:
  void pivot(Index r, Index q) {
    const double piv = tab_(r, q);
    Eigen::RowVectorXd prow = tab_.row(r) / piv;
    Vector pcol = tab_.col(q);
    pcol(r) = 0.0;
    tab_.noalias() -= pcol * prow;
    tab_.row(r) = prow;
  }

  BoundedSimplex::Options opt_;
  Index m_ = 0;
  Index n_ = 0;
  Index total_ = 0;
  Vector b_;
  Vector lo_, hi_, x_, sign_;
  Matrix full_;
  RowMatrix tab_;
  std::vector<Index> basis_;
  std::vector<VarState> state_;
};

}  // namespace

SolveResult BoundedSimplex::solve(const LinearProgram& lp) const {
  lp.validate();
  SolveResult result;
  for (Index j = 0; j < lp.variables(); ++j) {
    if (lp.lo(j) > lp.hi(j)) {
      result.status = SolveStatus::Infeasible;
      return result;
    }
  }

  Tableau tab(lp, options_);
  const long cap = options_.max_iterations > 0
                       ? options_.max_iterations
                       : 50L * static_cast<long>(lp.constraints() + lp.variables()) + 1000L;

  Vector phase1 = Vector::Zero(tab.total());
  phase1.tail(tab.total() - tab.structural_count()).setOnes();
  PhaseOutcome outcome = tab.run(phase1, result.iterations, cap);
  if (outcome != PhaseOutcome::Optimal || !tab.refactor()) {
    result.status = SolveStatus::NumericalFailure;
    return result;
  }
  const double b_scale = lp.b.size() ? lp.b.cwiseAbs().maxCoeff() : 0.0;
  if (tab.artificial_sum() > options_.primal * (1.0 + b_scale)) {
    result.status = SolveStatus::Infeasible;
    return result;
  }

  tab.close_artificials();
  Vector phase2 = Vector::Zero(tab.total());
  phase2.head(lp.variables()) = lp.objective;
  outcome = tab.run(phase2, result.iterations, cap);
  if (outcome == PhaseOutcome::Unbounded) {
    result.status = SolveStatus::Unbounded;
    return result;
  }
  if (outcome != PhaseOutcome::Optimal || !tab.refactor()) {
    result.status = SolveStatus::NumericalFailure;
    return result;
  }

  Vector x = tab.structural();
  result.status = SolveStatus::Optimal;
  result.objective_value = lp.objective.dot(x);
  result.x = std::move(x);
  return result;
}

std::string BoundedSimplex::name() const {
  return options_.pricing == Pricing::Bland ? "simplex-bland" : "simplex";
}

}  // namespace sparseflux
