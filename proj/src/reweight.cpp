#include "sparseflux/reweight.hpp"

#include "sparseflux/errors.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

namespace sparseflux {

std::string_view to_string(WeightRule rule) {
  switch (rule) {
    case WeightRule::W1: return "W1";
    case WeightRule::NW4: return "NW4";
    case WeightRule::NW4Random: return "NW4Random";
  }
  return "unknown";
}

WeightRule parse_weight_rule(std::string_view name) {
  if (name == "W1" || name == "w1") return WeightRule::W1;
  if (name == "NW4" || name == "nw4") return WeightRule::NW4;
  if (name == "NW4Random" || name == "nw4random" || name == "nw4-random") return WeightRule::NW4Random;
  throw Error(ErrorKind::Config, "unknown weight rule '" + std::string(name) + "'");
}

void WeightRuleConfig::validate() const {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::Config, "epsilon must be positive");
  if (!(p >= 0.0)) throw Error(ErrorKind::Config, "NW4 exponent p must be nonnegative");
  if (iterations < 1) throw Error(ErrorKind::Config, "iterations must be at least 1");
  if (stable_stop < 0) throw Error(ErrorKind::Config, "stable_stop must be nonnegative");
}

Vector update_weights_w1(const Vector& v, double epsilon) {
  return (v.array().abs() + epsilon).inverse().matrix();
}

Vector update_weights_nw4(const Vector& v, double epsilon, double p) {
  Vector w(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i)) + epsilon;
    w(i) = (1.0 + std::pow(a, p)) / std::pow(a, p + 1.0);
  }
  return w;
}

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Vector apply_random_factors(const Vector& weights, const Vector& r) {
  return (weights.array() * r.array().cube()).matrix();
}

Vector update_weights_nw4_random(const Vector& v, double epsilon, double p, std::mt19937_64& rng) {
  Vector r(v.size());
  for (Index i = 0; i < r.size(); ++i) r(i) = unit_uniform(rng);
  return apply_random_factors(update_weights_nw4(v, epsilon, p), r);
}

double merit_log(const Vector& v, double epsilon) {
  double sum = 0.0;
  for (Index i = 0; i < v.size(); ++i) sum += std::log(std::abs(v(i)) + epsilon);
  return sum;
}

Vector row_magnitudes(const Matrix& V, RowNorm norm) {
  Vector out(V.rows());
  for (Index i = 0; i < V.rows(); ++i) out(i) = norm == RowNorm::L2 ? V.row(i).norm() : V.row(i).lpNorm<1>();
  return out;
}

FluxSolution run_feasibility(const FluxModel& model, const SolverSettings& settings) {
  if (model.scenarios() != 1) throw Error(ErrorKind::Config, "feasibility round expects a single bound column");
  const SolveResult r = find_feasible(model.S, model.bounds.lower(0), model.bounds.upper(0), settings, model.rhs);
  FluxSolution out;
  out.values = r.optimal() ? Matrix(*r.x) : Matrix::Zero(model.reactions(), 1);
  out.status = {r.status};
  compute_residuals(model, out);
  return out;
}

namespace {

struct ColumnOutcome {
  SolveStatus status = SolveStatus::NumericalFailure;
  Vector v;
};

// Solves the c per-column weighted l1 problems. Each column writes only its own
// slot, so the result does not depend on completion order.
std::vector<ColumnOutcome> solve_columns(const FluxModel& model, const std::vector<bool>& enforced,
                                         const Vector& weights, const SolverSettings& settings) {
  const Index c = model.scenarios();
  std::vector<ColumnOutcome> out(static_cast<std::size_t>(c));
  auto solve_one = [&](Index j) {
    const SolveResult r = min_weighted_l1(model.S, model.bounds.lower(j), model.bounds.upper(j), weights,
                                          enforced[static_cast<std::size_t>(j)], settings, model.rhs);
    auto& slot = out[static_cast<std::size_t>(j)];
    slot.status = r.status;
    if (r.optimal()) slot.v = *r.x;
  };

  const unsigned workers = std::min<unsigned>(std::max(1u, settings.threads), static_cast<unsigned>(c));
  if (workers <= 1) {
    for (Index j = 0; j < c; ++j) solve_one(j);
    return out;
  }
  std::atomic<Index> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (Index j = next++; j < c; j = next++) solve_one(j);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace

ReweightResult reweighted_l1(const FluxModel& model, const std::vector<bool>& enforced,
                             const WeightRuleConfig& config, std::span<const Index> excluded,
                             const SolverSettings& settings) {
  config.validate();
  const Index n = model.reactions();
  const Index c = model.scenarios();
  if (static_cast<Index>(enforced.size()) != c)
    throw Error(ErrorKind::Config, "enforced-column mask has the wrong length");

  std::vector<bool> free_row(static_cast<std::size_t>(n), true);
  for (Index i : excluded) {
    if (i < 0 || i >= n) throw Error(ErrorKind::Config, "excluded row index out of range");
    free_row[static_cast<std::size_t>(i)] = false;
  }
  auto pin_excluded = [&](Vector& w) {
    for (Index i = 0; i < n; ++i)
      if (!free_row[static_cast<std::size_t>(i)]) w(i) = 0.0;
  };

  std::mt19937_64 rng(config.seed);
  const bool deterministic = config.rule != WeightRule::NW4Random;

  Vector weights = Vector::Ones(n);
  pin_excluded(weights);

  ReweightResult result;
  bool have_best = false;
  Matrix best;
  int stable = 0;

  for (int t = 0; t < config.iterations; ++t) {
    const auto columns = solve_columns(model, enforced, weights, settings);
    bool ok = true;
    Matrix V(n, c);
    for (Index j = 0; j < c && ok; ++j) {
      const auto& col = columns[static_cast<std::size_t>(j)];
      ok = col.status == SolveStatus::Optimal;
      if (ok) V.col(j) = col.v;
    }
    if (!ok) {
      if (!have_best) throw Error(ErrorKind::Numerical, "weighted l1 subproblem failed in the first sweep");
      result.numerical_warning = true;
      break;
    }

    const Vector rows = row_magnitudes(V, config.row_norm);
    IterationRecord rec;
    rec.iteration = t;
    rec.support = support(V, settings.tol.zero);
    rec.l1 = V.cwiseAbs().sum();
    rec.weighted_objective = (V.cwiseAbs().transpose() * weights).sum();
    for (Index i = 0; i < n; ++i)
      if (free_row[static_cast<std::size_t>(i)]) rec.merit += std::log(rows(i) + config.epsilon);

    const Index score = static_cast<Index>(rec.support.size());
    if (!have_best || score < result.score || (score == result.score && rec.l1 < result.l1)) {
      have_best = true;
      best = V;
      result.score = score;
      result.l1 = rec.l1;
      result.best_iteration = t;
    }

    const bool same = !result.trace.empty() && result.trace.back().support == rec.support;
    stable = same ? stable + 1 : 1;
    result.trace.push_back(std::move(rec));
    if (deterministic && config.stable_stop > 0 && stable >= config.stable_stop) break;
    if (t + 1 == config.iterations) break;

    switch (config.rule) {
      case WeightRule::W1: weights = update_weights_w1(rows, config.epsilon); break;
      case WeightRule::NW4: weights = update_weights_nw4(rows, config.epsilon, config.p); break;
      case WeightRule::NW4Random: weights = update_weights_nw4_random(rows, config.epsilon, config.p, rng); break;
    }
    pin_excluded(weights);
  }

  result.solution.values = std::move(best);
  result.solution.status.assign(static_cast<std::size_t>(c), SolveStatus::Optimal);
  compute_residuals(model, result.solution);
  return result;
}

ReweightResult sparse_flux(const FluxModel& model, const WeightRuleConfig& config,
                           std::span<const Index> excluded, const SolverSettings& settings) {
  if (model.scenarios() != 1) throw Error(ErrorKind::Config, "sparse_flux expects a single bound column");
  config.validate();
  switch (check_feasibility(model.S, model.bounds.lower(0), model.bounds.upper(0), settings, model.rhs)) {
    case Feasibility::Feasible: break;
    case Feasibility::Infeasible: throw Error(ErrorKind::Infeasible, "no steady-state flux satisfies the bounds");
    case Feasibility::NumericalFailure: throw Error(ErrorKind::Numerical, "feasibility check failed numerically");
  }
  return reweighted_l1(model, {true}, config, excluded, settings);
}

}  // namespace sparseflux
