#pragma once

// Core data types shared by every solver: the stoichiometric matrix, flux
// bounds, solutions, support sets, and the mixed row norms used to score them.

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <span>
#include <string_view>
#include <vector>

namespace sparseflux {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Numerical thresholds. `zero` decides what counts as a nonzero flux;
/// equality residuals are accepted up to `feasibility * (1 + max|S|)`.
struct Tolerances {
  double zero = 1e-6;
  double feasibility = 1e-8;
  double bound = 1e-9;
};

/// Sparse m x n stoichiometric matrix (metabolites x reactions).
/// Duplicate (row, col) entries are summed at construction; explicit zeros are dropped.
class StoichiometricMatrix {
 public:
  StoichiometricMatrix() = default;
  StoichiometricMatrix(Index rows, Index cols, std::span<const Triplet> entries);
  StoichiometricMatrix(const Matrix& dense);

  Index rows() const { return mat_.rows(); }
  Index cols() const { return mat_.cols(); }
  Index nonzeros() const { return mat_.nonZeros(); }
  const SparseMatrix& matrix() const { return mat_; }
  double max_abs() const { return max_abs_; }

  /// S^I: the submatrix made of the listed columns, in the listed order.
  StoichiometricMatrix select_columns(std::span<const Index> columns) const;
  std::vector<Triplet> triplets() const;
  Matrix dense() const { return Matrix(mat_); }

  /// Entrywise feasibility threshold for |S v| under `tol`.
  double equality_tolerance(const Tolerances& tol) const {
    return tol.feasibility * (1.0 + max_abs_);
  }

 private:
  SparseMatrix mat_;
  double max_abs_ = 0.0;
};

/// Per-reaction lower/upper bounds for c scenarios (n x c). c == 1 is the vector case.
class BoundsSet {
 public:
  BoundsSet() = default;
  BoundsSet(Matrix lower, Matrix upper);
  static BoundsSet from_vectors(const Vector& lower, const Vector& upper);

  Index rows() const { return lower_.rows(); }
  Index scenarios() const { return lower_.cols(); }
  const Matrix& lower() const { return lower_; }
  const Matrix& upper() const { return upper_; }
  Vector lower(Index j) const { return lower_.col(j); }
  Vector upper(Index j) const { return upper_.col(j); }

  BoundsSet select_rows(std::span<const Index> rows) const;
  BoundsSet select_scenarios(std::span<const Index> scenarios) const;

 private:
  Matrix lower_;
  Matrix upper_;
};

/// A steady-state flux problem: S V = rhs 1^T with L <= V <= U.
/// `rhs` is zero unless fixed variables have been folded into it.
struct FluxModel {
  StoichiometricMatrix S;
  BoundsSet bounds;
  Vector rhs;  // length m

  FluxModel() = default;
  FluxModel(StoichiometricMatrix s, BoundsSet b);
  FluxModel(StoichiometricMatrix s, BoundsSet b, Vector r);

  Index metabolites() const { return S.rows(); }
  Index reactions() const { return S.cols(); }
  Index scenarios() const { return bounds.scenarios(); }
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

std::string_view to_string(SolveStatus status);

/// Flux vector or matrix with per-column solver status and equality residual.
struct FluxSolution {
  Matrix values;  // n x c
  std::vector<SolveStatus> status;
  std::vector<double> equality_residual;  // max_i |(S v_j - rhs)_i|

  Index reactions() const { return values.rows(); }
  Index scenarios() const { return values.cols(); }
  bool all_optimal() const;
};

/// Fill `equality_residual` for every column of `solution`.
void compute_residuals(const FluxModel& model, FluxSolution& solution);

/// Sorted set of row indices whose row is nonzero.
struct SupportSet {
  std::vector<Index> indices;

  std::size_t size() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
  bool contains(Index i) const;
  friend bool operator==(const SupportSet&, const SupportSet&) = default;
};

/// ||X||_{p,q}: the q-"norm" of the vector of row p-norms.
/// Supports p in {1, 2} and q in {0, 1}; q = 0 counts rows whose p-norm exceeds `zero_tol`.
double mixed_norm(const Matrix& X, int p, int q, double zero_tol = Tolerances{}.zero);

/// {i : max_j |V(i, j)| > tol}
SupportSet support(const Matrix& V, double tol = Tolerances{}.zero);

/// {j : max_i |(S V)(i, j)| > tol}; its size is ||(SV)^T||_{2,0}.
std::vector<Index> nonzero_equality_columns(const StoichiometricMatrix& S, const Matrix& V,
                                            double tol = Tolerances{}.zero);

/// Largest amount by which any entry of V leaves [lower, upper].
double max_bound_violation(const BoundsSet& bounds, const Matrix& V);

}  // namespace sparseflux
