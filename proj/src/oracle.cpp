#include "sparseflux/oracle.hpp"

#include "sparseflux/errors.hpp"

#include <algorithm>
#include <functional>
#include <string>

namespace sparseflux {

namespace {

// Advances `combo` (sorted, size k, values in [0, n)) to the next combination
// in lexicographic order. Returns false after the last one.
bool next_combination(std::vector<Index>& combo, Index n) {
  const Index k = static_cast<Index>(combo.size());
  for (Index pos = k - 1; pos >= 0; --pos) {
    if (combo[pos] < n - k + pos) {
      ++combo[pos];
      for (Index q = pos + 1; q < k; ++q) combo[q] = combo[q - 1] + 1;
      return true;
    }
  }
  return false;
}

using RowTest = std::function<bool(const std::vector<Index>&)>;

// Returns the smallest level <= max_level holding a feasible row set, or -1.
Index search_levels(Index n, Index max_level, const RowTest& feasible, std::vector<SupportSet>& witnesses) {
  for (Index k = 0; k <= std::min(n, max_level); ++k) {
    std::vector<Index> combo(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) combo[i] = i;
    bool found = false;
    do {
      if (feasible(combo)) {
        found = true;
        witnesses.push_back(SupportSet{combo});
      }
    } while (next_combination(combo, n));
    if (found) return k;
  }
  return -1;
}

// Feasibility of the model when every row outside `rows` is pinned to zero.
class RestrictedModel {
 public:
  RestrictedModel(const FluxModel& model, const SolverSettings& settings, long& solves)
      : model_(model), settings_(settings), solves_(solves) {}

  bool feasible(const std::vector<Index>& rows, const std::vector<bool>& enforced) const {
    const Index n = model_.reactions();
    std::vector<bool> keep(static_cast<std::size_t>(n), false);
    for (Index i : rows) keep[static_cast<std::size_t>(i)] = true;
    for (Index j = 0; j < model_.scenarios(); ++j) {
      Vector lo = model_.bounds.lower(j);
      Vector hi = model_.bounds.upper(j);
      for (Index i = 0; i < n; ++i) {
        if (keep[static_cast<std::size_t>(i)]) continue;
        if (lo(i) > 0.0 || hi(i) < 0.0) return false;
        lo(i) = 0.0;
        hi(i) = 0.0;
      }
      if (!enforced[static_cast<std::size_t>(j)]) continue;
      ++solves_;
      switch (check_feasibility(model_.S, lo, hi, settings_, model_.rhs)) {
        case Feasibility::Feasible: break;
        case Feasibility::Infeasible: return false;
        case Feasibility::NumericalFailure:
          throw Error(ErrorKind::Numerical, "oracle feasibility test failed numerically");
      }
    }
    return true;
  }

 private:
  const FluxModel& model_;
  const SolverSettings& settings_;
  long& solves_;
};

void check_caps(Index n, Index max_n, Index c, Index max_c) {
  if (n > max_n)
    throw Error(ErrorKind::Refused, "oracle refuses n = " + std::to_string(n) + " > cap " + std::to_string(max_n));
  if (c > max_c)
    throw Error(ErrorKind::Refused, "oracle refuses c = " + std::to_string(c) + " > cap " + std::to_string(max_c));
}

OracleResult min_joint_support(const FluxModel& model, const std::vector<bool>& enforced,
                               const SolverSettings& settings) {
  OracleResult out;
  RestrictedModel restricted(model, settings, out.solves);
  const Index n = model.reactions();
  std::vector<Index> everything(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) everything[i] = i;
  if (!restricted.feasible(everything, enforced))
    throw Error(ErrorKind::Infeasible, "oracle instance is infeasible");
  out.optimum = search_levels(
      n, n, [&](const std::vector<Index>& rows) { return restricted.feasible(rows, enforced); }, out.witnesses);
  return out;
}

}  // namespace

OracleResult brute_force_min_l0(const StoichiometricMatrix& S, const Vector& lower, const Vector& upper,
                                Index max_n, const SolverSettings& settings) {
  check_caps(S.cols(), max_n, 1, 1);
  return min_joint_support(FluxModel(S, BoundsSet::from_vectors(lower, upper)), {true}, settings);
}

OracleResult brute_force_min_l20(const FluxModel& model, Index max_n, const SolverSettings& settings) {
  check_caps(model.reactions(), max_n, 0, 0);
  return min_joint_support(model, std::vector<bool>(static_cast<std::size_t>(model.scenarios()), true), settings);
}

OracleResult brute_force_budgeted(const FluxModel& model, Index K, Index max_n, Index max_c,
                                  const SolverSettings& settings) {
  const Index n = model.reactions();
  const Index c = model.scenarios();
  check_caps(n, max_n, c, max_c);
  if (K < 0 || K > c) throw Error(ErrorKind::Config, "budget K must lie in [0, c]");

  OracleResult out;
  out.optimum = -1;
  RestrictedModel restricted(model, settings, out.solves);
  for (Index size = 0; size <= K; ++size) {
    std::vector<Index> freed(static_cast<std::size_t>(size));
    for (Index k = 0; k < size; ++k) freed[k] = k;
    do {
      std::vector<bool> enforced(static_cast<std::size_t>(c), true);
      for (Index j : freed) enforced[static_cast<std::size_t>(j)] = false;
      const Index cap = out.optimum < 0 ? n : out.optimum;
      std::vector<SupportSet> found;
      const Index level = search_levels(
          n, cap, [&](const std::vector<Index>& rows) { return restricted.feasible(rows, enforced); }, found);
      if (level < 0) continue;
      if (out.optimum < 0 || level < out.optimum) {
        out.optimum = level;
        out.witnesses.clear();
      }
      for (auto& w : found)
        if (std::find(out.witnesses.begin(), out.witnesses.end(), w) == out.witnesses.end())
          out.witnesses.push_back(std::move(w));
    } while (next_combination(freed, c));
  }
  if (out.optimum < 0) throw Error(ErrorKind::Infeasible, "oracle instance is infeasible for every relaxation");
  return out;
}

}  // namespace sparseflux
