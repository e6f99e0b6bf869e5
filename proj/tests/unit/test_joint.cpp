#include "corpus.hpp"

#include "sparseflux/errors.hpp"
#include "sparseflux/joint.hpp"
#include "sparseflux/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace sparseflux;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

StoichiometricMatrix balance_row() {
  Matrix s(1, 2);
  s << 1, -1;
  return StoichiometricMatrix(s);
}

// One source and three drains. Scenario 0 can drain through 1 or (more cheaply
// in l1) through 2, scenario 1 through 1 or 3, scenario 2 only through 1.
FluxModel shared_drain() {
  Matrix S(1, 4);
  S << 1, -1, -2, -2;
  Matrix lo = Matrix::Zero(4, 3), hi(4, 3);
  hi << 1, 1, 2,
        2, 2, 2,
        2, 0, 0,
        0, 2, 0;
  lo.row(0) = hi.row(0);
  return FluxModel(StoichiometricMatrix(S), BoundsSet(lo, hi));
}

}  // namespace

TEST_CASE("column_advantage examples") {
  const auto S = balance_row();
  CHECK(column_advantage(S, vec({1, 0}), vec({2, 2}), {}) == doctest::Approx(1.0));
  CHECK(column_advantage(S, vec({-1, -1}), vec({1, 1}), {}) == 0.0);
  CHECK(std::isinf(column_advantage(S, vec({1, 0}), vec({2, 0}), {})));
}

TEST_CASE("advantages are non-negative on random instances") {
  for (const auto& model : testing::joint_corpus(4, 10)) {
    const Vector d = column_advantages(model);
    CHECK(d.size() == model.scenarios());
    CHECK((d.array() >= -1e-9).all());
  }
}

TEST_CASE("select_penalized examples") {
  const auto sel = select_penalized(vec({1, 5}), 3);
  CHECK(sel.enforced_columns() == std::vector<Index>{0});
  CHECK(sel.freed_columns() == std::vector<Index>{1});
  CHECK(select_penalized(vec({1, 2, 7}), 7.125).freed_columns().empty());
  CHECK(select_penalized(vec({0, 2}), 0).enforced_columns().empty());
}

TEST_CASE("select_budgeted examples") {
  const auto a = select_budgeted(vec({3, 1, 2}), 1);
  CHECK(a.freed_columns() == std::vector<Index>{0});
  CHECK(a.enforced_columns() == std::vector<Index>{1, 2});
  CHECK(select_budgeted(vec({3, 1, 2}), 0).freed_columns().empty());
  CHECK(select_budgeted(vec({2, 2, 1}), 1).freed_columns() == std::vector<Index>{0});
  CHECK(select_budgeted(vec({1, 2, 2}), 1).freed_columns() == std::vector<Index>{1});
  CHECK(select_budgeted(vec({1, 2}), 2).freed_columns() == std::vector<Index>{0, 1});
  CHECK_THROWS_AS(select_budgeted(vec({1, 2}), 5), Error);
  CHECK_THROWS_AS(select_budgeted(vec({1}), -1), Error);
}

TEST_CASE("default iteration table") {
  CHECK(default_iterations(95, 1) == 20);
  CHECK(default_iterations(95, 20) == 10);
  CHECK(default_iterations(100000, 20) == 5);
}

TEST_CASE("penalized_objective examples") {
  const auto S = balance_row();
  CHECK(penalized_objective(Matrix::Zero(2, 3), S, 4.0) == 0.0);
  Matrix V(2, 2);
  V << 3, 4, 1, 0;
  CHECK(penalized_objective(V, S, 0.0) == doctest::Approx(mixed_norm(V, 2, 1)));
  Matrix one(2, 1);
  one << 1, 0;
  CHECK(penalized_objective(one, S, 2.0) == doctest::Approx(3.0));
}

TEST_CASE("joint with one column collapses to sparse_flux") {
  WeightRuleConfig cfg;
  for (const auto& model : testing::single_corpus(13, 10)) {
    const auto a = sparse_flux(model, cfg, {});
    const auto b = joint_sparse(model, ConstraintSelection::all(1), cfg, {});
    CHECK(a.solution.values == b.solution.values);
    CHECK(a.score == b.score);
  }
}

TEST_CASE("shared weights find a common drain") {
  const auto model = shared_drain();
  Index independent = 0;
  std::set<Index> union_rows;
  for (Index j = 0; j < model.scenarios(); ++j) {
    const FluxModel col(model.S, model.bounds.select_scenarios(std::vector<Index>{j}));
    const auto r = sparse_flux(col, {}, {});
    for (Index i : support(r.solution.values).indices) union_rows.insert(i);
    independent = std::max(independent, r.score);
  }
  CHECK(union_rows.size() == 4);

  WeightRuleConfig cfg;
  cfg.iterations = default_iterations(model.reactions(), model.scenarios());
  const auto joint = joint_sparse(model, ConstraintSelection::all(3), cfg, {});
  CHECK(joint.score == 2);
  CHECK(joint.score < static_cast<Index>(union_rows.size()));
  CHECK(brute_force_min_l20(model).optimum == 2);
}

TEST_CASE("joint runs respect enforcement, budget and dominance") {
  WeightRuleConfig cfg;
  cfg.iterations = 10;
  for (const auto& model : testing::joint_corpus(6, 10)) {
    const Index c = model.scenarios();
    const auto all = joint_sparse(model, ConstraintSelection::all(c), cfg, {});
    const auto oracle = brute_force_min_l20(model);
    CHECK(all.score >= oracle.optimum);
    for (Index j = 0; j < c; ++j) CHECK(all.solution.equality_residual[j] <= model.S.equality_tolerance({}));
    CHECK(max_bound_violation(model.bounds, all.solution.values) <= 1e-9);

    const Vector d = column_advantages(model);
    const auto dominant = select_penalized(d, d.maxCoeff() + 1.0);
    CHECK(dominant.freed_columns().empty());
    const auto r4 = joint_sparse(model, dominant, cfg, {});
    CHECK(r4.solution.values == all.solution.values);

    for (Index K = 0; K <= c; ++K) {
      const auto sel = select_budgeted(d, K);
      const auto r5 = joint_sparse(model, sel, cfg, {});
      CHECK(static_cast<Index>(nonzero_equality_columns(model.S, r5.solution.values).size()) <= K);
      for (Index j : sel.enforced_columns())
        CHECK(r5.solution.equality_residual[j] <= model.S.equality_tolerance({}));
      if (K == 0) CHECK(r5.solution.values == all.solution.values);
      CHECK(r5.score >= brute_force_budgeted(model, K).optimum);
    }
  }
}

TEST_CASE("joint_sparse names an infeasible enforced column") {
  const auto S = balance_row();
  Matrix lo(2, 2), hi(2, 2);
  lo << 0, 1, 0, 0;
  hi << 1, 2, 1, 0;
  const FluxModel model(S, BoundsSet(lo, hi));
  try {
    joint_sparse(model, ConstraintSelection::all(2), {}, {});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Infeasible);
    CHECK(std::string(e.what()).find("column 1") != std::string::npos);
  }
  // Freeing the bad column makes the run go through.
  const auto freed = joint_sparse(model, select_budgeted(vec({0, 1}), 1), {}, {});
  CHECK(freed.solution.all_optimal());
}

TEST_CASE("validate_infeasibility examples") {
  const auto S = balance_row();
  const BoundsSet panel(Matrix::Ones(2, 1), Matrix::Ones(2, 1) * 2);
  CHECK(validate_infeasibility(S, SupportSet{}, panel).percentage == 0.0);

  Matrix lo(2, 1), hi(2, 1);
  lo << 1, 0;
  hi << 2, 0;
  const auto blocked = validate_infeasibility(S, SupportSet{{0, 1}}, BoundsSet(lo, hi));
  CHECK(blocked.percentage == 100.0);
  CHECK(blocked.infeasible == 1);
  CHECK_THROWS_AS(validate_infeasibility(S, SupportSet{{0}}, BoundsSet(Matrix::Zero(3, 1), Matrix::Zero(3, 1))),
                  Error);
}

TEST_CASE("shrinking the support never lowers the infeasible share") {
  // Dropping a row removes its box as well, so the comparison is only
  // meaningful when every dropped row's box contains zero in every scenario.
  testing::CorpusRng rng(55);
  int compared = 0;
  for (const auto& model : testing::joint_corpus(12, 12)) {
    const Index n = model.reactions();
    Matrix lo = model.bounds.lower(), hi = model.bounds.upper();
    for (Index k = 0; k < lo.cols(); ++k)
      for (Index i = 0; i < n; ++i)
        if (rng.coin(0.3)) {
          lo(i, k) = std::min(lo(i, k), 0.0);
          hi(i, k) = std::max(hi(i, k), 0.0);
        }
    const BoundsSet panel(lo, hi);
    std::vector<Index> rows(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) rows[i] = i;
    SupportSet current{rows};
    double previous = validate_infeasibility(model.S, current, panel).percentage;
    for (Index i = n - 1; i >= 0; --i) {
      if (!((lo.row(i).array() <= 0.0).all() && (hi.row(i).array() >= 0.0).all())) continue;
      std::erase(current.indices, i);
      const double now = validate_infeasibility(model.S, current, panel).percentage;
      CHECK(now >= previous);
      previous = now;
      ++compared;
    }
  }
  CHECK(compared > 10);
}
