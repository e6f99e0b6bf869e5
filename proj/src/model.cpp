#include "sparseflux/model.hpp"

#include "sparseflux/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sparseflux {

namespace {

double sparse_max_abs(const SparseMatrix& m) {
  double out = 0.0;
  for (Index k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) out = std::max(out, std::abs(it.value()));
  return out;
}

}  // namespace

StoichiometricMatrix::StoichiometricMatrix(Index rows, Index cols, std::span<const Triplet> entries) {
  if (rows < 0 || cols < 0) throw Error(ErrorKind::Config, "negative matrix dimension");
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(entries.size());
  for (const auto& t : entries) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols || !std::isfinite(t.value)) {
      std::ostringstream os;
      os << "invalid matrix entry (" << t.row << ", " << t.col << ", " << t.value << ") for a " << rows
         << " x " << cols << " matrix";
      throw Error(ErrorKind::Config, os.str());
    }
    trips.emplace_back(t.row, t.col, t.value);
  }
  mat_.resize(rows, cols);
  mat_.setFromTriplets(trips.begin(), trips.end());
  mat_.prune(0.0);
  mat_.makeCompressed();
  max_abs_ = sparse_max_abs(mat_);
}

StoichiometricMatrix::StoichiometricMatrix(const Matrix& dense) {
  mat_ = dense.sparseView();
  mat_.makeCompressed();
  max_abs_ = sparse_max_abs(mat_);
}

StoichiometricMatrix StoichiometricMatrix::select_columns(std::span<const Index> columns) const {
  std::vector<Triplet> trips;
  for (std::size_t k = 0; k < columns.size(); ++k) {
    const Index c = columns[k];
    if (c < 0 || c >= cols()) throw Error(ErrorKind::Config, "column selection out of range");
    for (SparseMatrix::InnerIterator it(mat_, c); it; ++it)
      trips.push_back({it.row(), static_cast<Index>(k), it.value()});
  }
  return StoichiometricMatrix(rows(), static_cast<Index>(columns.size()), trips);
}

std::vector<Triplet> StoichiometricMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(static_cast<std::size_t>(mat_.nonZeros()));
  for (Index k = 0; k < mat_.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(mat_, k); it; ++it) out.push_back({it.row(), it.col(), it.value()});
  return out;
}

BoundsSet::BoundsSet(Matrix lower, Matrix upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.rows() != upper_.rows() || lower_.cols() != upper_.cols()) {
    std::ostringstream os;
    os << "bounds shape mismatch: lower is " << lower_.rows() << " x " << lower_.cols() << ", upper is "
       << upper_.rows() << " x " << upper_.cols();
    throw Error(ErrorKind::Config, os.str());
  }
  for (Index j = 0; j < lower_.cols(); ++j) {
    for (Index i = 0; i < lower_.rows(); ++i) {
      const double lo = lower_(i, j);
      const double hi = upper_(i, j);
      if (std::isnan(lo) || std::isnan(hi) || lo > hi || lo == INFINITY || hi == -INFINITY) {
        std::ostringstream os;
        os << "inconsistent bounds at (" << i << ", " << j << "): [" << lo << ", " << hi << "]";
        throw Error(ErrorKind::Config, os.str());
      }
    }
  }
}

BoundsSet BoundsSet::from_vectors(const Vector& lower, const Vector& upper) {
  return BoundsSet(Matrix(lower), Matrix(upper));
}

BoundsSet BoundsSet::select_rows(std::span<const Index> rows) const {
  Matrix lo(static_cast<Index>(rows.size()), scenarios());
  Matrix hi(static_cast<Index>(rows.size()), scenarios());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    lo.row(static_cast<Index>(k)) = lower_.row(rows[k]);
    hi.row(static_cast<Index>(k)) = upper_.row(rows[k]);
  }
  return BoundsSet(std::move(lo), std::move(hi));
}

BoundsSet BoundsSet::select_scenarios(std::span<const Index> cols) const {
  Matrix lo(rows(), static_cast<Index>(cols.size()));
  Matrix hi(rows(), static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    lo.col(static_cast<Index>(k)) = lower_.col(cols[k]);
    hi.col(static_cast<Index>(k)) = upper_.col(cols[k]);
  }
  return BoundsSet(std::move(lo), std::move(hi));
}

FluxModel::FluxModel(StoichiometricMatrix s, BoundsSet b)
    : FluxModel(std::move(s), std::move(b), Vector()) {}

FluxModel::FluxModel(StoichiometricMatrix s, BoundsSet b, Vector r)
    : S(std::move(s)), bounds(std::move(b)), rhs(std::move(r)) {
  if (rhs.size() == 0) rhs = Vector::Zero(S.rows());
  if (bounds.rows() != S.cols()) {
    std::ostringstream os;
    os << "bounds have " << bounds.rows() << " rows but S has " << S.cols() << " columns";
    throw Error(ErrorKind::Config, os.str());
  }
  if (rhs.size() != S.rows()) throw Error(ErrorKind::Config, "right-hand side length does not match S");
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

bool FluxSolution::all_optimal() const {
  return std::all_of(status.begin(), status.end(), [](SolveStatus s) { return s == SolveStatus::Optimal; });
}

void compute_residuals(const FluxModel& model, FluxSolution& solution) {
  const Matrix balance = model.S.matrix() * solution.values;
  solution.equality_residual.assign(static_cast<std::size_t>(balance.cols()), 0.0);
  for (Index j = 0; j < balance.cols(); ++j) {
    const double r = balance.rows() == 0 ? 0.0 : (balance.col(j) - model.rhs).cwiseAbs().maxCoeff();
    solution.equality_residual[static_cast<std::size_t>(j)] = r;
  }
}

bool SupportSet::contains(Index i) const {
  return std::binary_search(indices.begin(), indices.end(), i);
}

double mixed_norm(const Matrix& X, int p, int q, double zero_tol) {
  if ((p != 1 && p != 2) || (q != 0 && q != 1)) {
    std::ostringstream os;
    os << "unsupported mixed norm (p=" << p << ", q=" << q << ")";
    throw Error(ErrorKind::Config, os.str());
  }
  double out = 0.0;
  for (Index i = 0; i < X.rows(); ++i) {
    const double row = p == 1 ? X.row(i).lpNorm<1>() : X.row(i).norm();
    out += q == 1 ? row : (row > zero_tol ? 1.0 : 0.0);
  }
  return out;
}

SupportSet support(const Matrix& V, double tol) {
  SupportSet out;
  for (Index i = 0; i < V.rows(); ++i)
    if (V.cols() > 0 && V.row(i).cwiseAbs().maxCoeff() > tol) out.indices.push_back(i);
  return out;
}

std::vector<Index> nonzero_equality_columns(const StoichiometricMatrix& S, const Matrix& V, double tol) {
  if (S.cols() != V.rows()) {
    std::ostringstream os;
    os << "dimension mismatch: S has " << S.cols() << " columns, V has " << V.rows() << " rows";
    throw Error(ErrorKind::Config, os.str());
  }
  const Matrix SV = S.matrix() * V;
  std::vector<Index> out;
  for (Index j = 0; j < SV.cols(); ++j)
    if (SV.rows() > 0 && SV.col(j).cwiseAbs().maxCoeff() > tol) out.push_back(j);
  return out;
}

double max_bound_violation(const BoundsSet& bounds, const Matrix& V) {
  double worst = 0.0;
  for (Index j = 0; j < V.cols(); ++j) {
    for (Index i = 0; i < V.rows(); ++i) {
      worst = std::max(worst, bounds.lower()(i, j) - V(i, j));
      worst = std::max(worst, V(i, j) - bounds.upper()(i, j));
    }
  }
  return worst;
}

}  // namespace sparseflux
