#include "sparseflux/preprocess.hpp"

#include "sparseflux/errors.hpp"

#include <algorithm>

namespace sparseflux {

Matrix ReducedProblem::expand(const Matrix& reduced_values) const {
  if (reduced_values.rows() != static_cast<Index>(index_map.size()))
    throw Error(ErrorKind::Config, "reduced solution has the wrong number of rows");
  Matrix out = Matrix::Zero(original_reactions, reduced_values.cols());
  for (std::size_t k = 0; k < index_map.size(); ++k) out.row(index_map[k]) = reduced_values.row(static_cast<Index>(k));
  for (const auto& [row, value] : fixed) out.row(row).setConstant(value);
  return out;
}

std::vector<Index> ReducedProblem::to_original(std::span<const Index> reduced_rows) const {
  std::vector<Index> out;
  out.reserve(reduced_rows.size());
  for (Index r : reduced_rows) out.push_back(index_map.at(static_cast<std::size_t>(r)));
  return out;
}

std::vector<Index> ReducedProblem::to_reduced(std::span<const Index> original_rows) const {
  std::vector<Index> out;
  for (Index r : original_rows) {
    auto it = std::lower_bound(index_map.begin(), index_map.end(), r);
    if (it != index_map.end() && *it == r) out.push_back(static_cast<Index>(it - index_map.begin()));
  }
  return out;
}

ReducedProblem eliminate_fixed(const FluxModel& model) {
  const Index n = model.reactions();
  const Index c = model.scenarios();
  const Matrix& lo = model.bounds.lower();
  const Matrix& hi = model.bounds.upper();

  ReducedProblem out;
  out.original_reactions = n;
  Vector rhs = model.rhs;
  for (Index i = 0; i < n; ++i) {
    bool fixed = c > 0;
    for (Index j = 0; j < c && fixed; ++j) fixed = lo(i, j) == hi(i, j) && lo(i, j) == lo(i, 0);
    if (!fixed) {
      out.index_map.push_back(i);
      continue;
    }
    const double value = lo(i, 0);
    out.fixed.emplace_back(i, value);
    if (value != 0.0) rhs -= value * Vector(model.S.matrix().col(i));
  }
  out.reduced = FluxModel(model.S.select_columns(out.index_map), model.bounds.select_rows(out.index_map), rhs);
  return out;
}

std::vector<Index> forced_nonzero_rows(const BoundsSet& bounds) {
  std::vector<Index> out;
  for (Index i = 0; i < bounds.rows(); ++i) {
    bool forced = false;
    for (Index j = 0; j < bounds.scenarios() && !forced; ++j)
      forced = bounds.lower()(i, j) > 0.0 || bounds.upper()(i, j) < 0.0;
    if (forced) out.push_back(i);
  }
  return out;
}

LowerBoundResult sparsity_lower_bound(const FluxModel& model, const SupportSet& candidate_support,
                                      const SolverSettings& settings, const std::vector<bool>& enforced) {
  const Index c = model.scenarios();
  if (!enforced.empty() && static_cast<Index>(enforced.size()) != c)
    throw Error(ErrorKind::Config, "enforced-column mask has the wrong length");

  LowerBoundResult out;
  out.certified = forced_nonzero_rows(model.bounds);
  const std::vector<Index> forced = out.certified;

  for (Index i : candidate_support.indices) {
    if (i < 0 || i >= model.reactions()) throw Error(ErrorKind::Config, "candidate support index out of range");
    if (std::binary_search(forced.begin(), forced.end(), i)) continue;
    bool infeasible = false;
    bool failed = false;
    for (Index j = 0; j < c && !infeasible; ++j) {
      if (!enforced.empty() && !enforced[static_cast<std::size_t>(j)]) continue;
      Vector lo = model.bounds.lower(j);
      Vector hi = model.bounds.upper(j);
      lo(i) = 0.0;
      hi(i) = 0.0;
      ++out.solves;
      switch (check_feasibility(model.S, lo, hi, settings, model.rhs)) {
        case Feasibility::Infeasible: infeasible = true; break;
        case Feasibility::NumericalFailure: failed = true; break;
        case Feasibility::Feasible: break;
      }
    }
    if (infeasible) out.certified.push_back(i);
    else if (failed) out.inconclusive.push_back(i);
  }
  std::sort(out.certified.begin(), out.certified.end());
  out.bound = static_cast<Index>(out.certified.size());
  return out;
}

}  // namespace sparseflux
