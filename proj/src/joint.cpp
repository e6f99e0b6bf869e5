#include "sparseflux/joint.hpp"

#include "sparseflux/errors.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace sparseflux {

ConstraintSelection ConstraintSelection::all(Index c) {
  ConstraintSelection s;
  s.enforced.assign(static_cast<std::size_t>(c), true);
  return s;
}

std::vector<Index> ConstraintSelection::enforced_columns() const {
  std::vector<Index> out;
  for (std::size_t j = 0; j < enforced.size(); ++j)
    if (enforced[j]) out.push_back(static_cast<Index>(j));
  return out;
}

std::vector<Index> ConstraintSelection::freed_columns() const {
  std::vector<Index> out;
  for (std::size_t j = 0; j < enforced.size(); ++j)
    if (!enforced[j]) out.push_back(static_cast<Index>(j));
  return out;
}

double column_advantage(const StoichiometricMatrix& S, const Vector& lower, const Vector& upper,
                        const Vector& weights, Index column, const SolverSettings& settings, const Vector& rhs) {
  const Vector w = weights.size() ? weights : Vector::Ones(S.cols());
  const SolveResult relaxed = min_weighted_l1(S, lower, upper, w, false, settings, rhs);
  if (!relaxed.optimal())
    throw Error(ErrorKind::Numerical, "box-only l1 problem failed for column " + std::to_string(column));
  const SolveResult constrained = min_weighted_l1(S, lower, upper, w, true, settings, rhs);
  if (constrained.status == SolveStatus::Infeasible) return std::numeric_limits<double>::infinity();
  if (!constrained.optimal())
    throw Error(ErrorKind::Numerical, "steady-state l1 problem failed for column " + std::to_string(column));
  return *constrained.objective_value - *relaxed.objective_value;
}

Vector column_advantages(const FluxModel& model, const Vector& weights, const SolverSettings& settings) {
  Vector d(model.scenarios());
  for (Index j = 0; j < model.scenarios(); ++j)
    d(j) = column_advantage(model.S, model.bounds.lower(j), model.bounds.upper(j), weights, j, settings, model.rhs);
  return d;
}

ConstraintSelection select_penalized(const Vector& advantage, double lambda) {
  if (!(lambda >= 0.0)) throw Error(ErrorKind::Config, "lambda must be nonnegative");
  ConstraintSelection s;
  s.advantage = advantage;
  s.mode = Penalized{lambda};
  s.enforced.resize(static_cast<std::size_t>(advantage.size()));
  for (Index j = 0; j < advantage.size(); ++j) s.enforced[static_cast<std::size_t>(j)] = advantage(j) < lambda;
  return s;
}

ConstraintSelection select_budgeted(const Vector& advantage, Index K) {
  const Index c = advantage.size();
  if (K < 0 || K > c) throw Error(ErrorKind::Config, "budget K must lie in [0, c]");
  std::vector<Index> order(static_cast<std::size_t>(c));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return advantage(a) > advantage(b); });

  ConstraintSelection s;
  s.advantage = advantage;
  s.mode = Budgeted{K};
  s.enforced.assign(static_cast<std::size_t>(c), true);
  for (Index k = 0; k < K; ++k) s.enforced[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = false;
  return s;
}

int default_iterations(Index reactions, Index scenarios, Index large_threshold) {
  if (scenarios <= 1) return 20;
  return reactions * scenarios >= large_threshold ? 5 : 10;
}

ReweightResult joint_sparse(const FluxModel& model, const ConstraintSelection& selection,
                            const WeightRuleConfig& config, std::span<const Index> excluded,
                            const SolverSettings& settings) {
  config.validate();
  const Index c = model.scenarios();
  if (static_cast<Index>(selection.enforced.size()) != c)
    throw Error(ErrorKind::Config, "constraint selection does not match the scenario count");
  for (Index j = 0; j < c; ++j) {
    if (!selection.enforced[static_cast<std::size_t>(j)]) continue;
    switch (check_feasibility(model.S, model.bounds.lower(j), model.bounds.upper(j), settings, model.rhs)) {
      case Feasibility::Feasible: break;
      case Feasibility::Infeasible:
        throw Error(ErrorKind::Infeasible, "enforced column " + std::to_string(j) + " has no steady state");
      case Feasibility::NumericalFailure:
        throw Error(ErrorKind::Numerical, "feasibility check failed for column " + std::to_string(j));
    }
  }
  return reweighted_l1(model, selection.enforced, config, excluded, settings);
}

double penalized_objective(const Matrix& V, const StoichiometricMatrix& S, double lambda) {
  if (S.cols() != V.rows()) throw Error(ErrorKind::Config, "dimension mismatch between S and V");
  const Matrix SV = S.matrix() * V;
  return mixed_norm(V, 2, 1) + lambda * mixed_norm(SV.transpose(), 2, 1);
}

ValidationResult validate_infeasibility(const StoichiometricMatrix& S, const SupportSet& support_rows,
                                        const BoundsSet& validation_bounds, const SolverSettings& settings) {
  if (validation_bounds.rows() != S.cols())
    throw Error(ErrorKind::Config, "validation bounds do not match the column count of S");
  const StoichiometricMatrix sub = S.select_columns(support_rows.indices);
  const BoundsSet box = validation_bounds.select_rows(support_rows.indices);

  ValidationResult out;
  out.scenarios = validation_bounds.scenarios();
  for (Index k = 0; k < out.scenarios; ++k) {
    const Feasibility f = check_feasibility(sub, box.lower(k), box.upper(k), settings);
    out.outcomes.push_back(f);
    switch (f) {
      case Feasibility::Feasible: ++out.feasible; break;
      case Feasibility::Infeasible: ++out.infeasible; break;
      case Feasibility::NumericalFailure: ++out.failed; break;
    }
  }
  out.percentage = out.scenarios ? 100.0 * static_cast<double>(out.infeasible) / static_cast<double>(out.scenarios) : 0.0;
  return out;
}

}  // namespace sparseflux
