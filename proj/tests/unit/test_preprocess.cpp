#include "corpus.hpp"

#include "sparseflux/preprocess.hpp"
#include "sparseflux/reweight.hpp"

#include <doctest.h>

using namespace sparseflux;

namespace {

FluxModel make(const Matrix& S, const Matrix& lo, const Matrix& hi) {
  return FluxModel(StoichiometricMatrix(S), BoundsSet(lo, hi));
}

Matrix row(std::initializer_list<double> xs) {
  Matrix out(1, static_cast<Index>(xs.size()));
  Index j = 0;
  for (double x : xs) out(0, j++) = x;
  return out;
}

}  // namespace

TEST_CASE("eliminate_fixed examples") {
  const Matrix S = row({1, -1});
  const auto all = eliminate_fixed(make(S, Matrix::Zero(2, 1), Matrix::Zero(2, 1)));
  CHECK(all.reduced.reactions() == 0);
  CHECK(all.fixed.size() == 2);
  CHECK(all.expand(Matrix(0, 1)) == Matrix::Zero(2, 1));

  const auto one = eliminate_fixed(make(S, Matrix::Zero(2, 1), row({0, 2}).transpose()));
  REQUIRE(one.reduced.reactions() == 1);
  CHECK(one.index_map == std::vector<Index>{1});
  CHECK(one.fixed.front() == std::pair<Index, double>{0, 0.0});
  // Reduced system is -v1 = 0.
  CHECK(check_feasibility(one.reduced.S, Vector::Constant(1, 0.5), Vector::Constant(1, 2.0)) ==
        Feasibility::Infeasible);
}

TEST_CASE("nonzero fixed values fold into the right-hand side") {
  const Matrix S = row({1, -1});
  const auto r = eliminate_fixed(make(S, row({1, 0}).transpose(), row({1, 2}).transpose()));
  REQUIRE(r.reduced.reactions() == 1);
  CHECK(r.reduced.rhs(0) == -1.0);
  const auto sol = find_feasible(r.reduced.S, r.reduced.bounds.lower(0), r.reduced.bounds.upper(0), {},
                                 r.reduced.rhs);
  REQUIRE(sol.optimal());
  const Matrix full = r.expand(*sol.x);
  CHECK(full(0, 0) == 1.0);
  CHECK(full(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("elimination requires agreement across scenarios") {
  const Matrix S = row({1, -1, 1});
  Matrix lo(3, 2), hi(3, 2);
  lo << 0, 0, 1, 2, -1, -1;
  hi << 0, 0, 1, 2, 1, 1;
  const auto r = eliminate_fixed(make(S, lo, hi));
  CHECK(r.index_map == std::vector<Index>{1, 2});
  CHECK(r.fixed.size() == 1);
}

TEST_CASE("eliminate_fixed is idempotent and round-trips") {
  for (const auto& model : testing::single_corpus(31, 15)) {
    const auto once = eliminate_fixed(model);
    const auto twice = eliminate_fixed(once.reduced);
    CHECK(twice.fixed.empty());
    CHECK(twice.reduced.reactions() == once.reduced.reactions());

    const Vector w = Vector::Ones(once.reduced.reactions());
    const auto sol = min_weighted_l1(once.reduced.S, once.reduced.bounds.lower(0), once.reduced.bounds.upper(0), w,
                                     true, {}, once.reduced.rhs);
    REQUIRE(sol.optimal());
    const Matrix full = once.expand(*sol.x);
    const Vector v = full.col(0);
    CHECK((model.S.matrix() * v).cwiseAbs().maxCoeff() <= model.S.equality_tolerance({}));
    CHECK(max_bound_violation(model.bounds, full) <= 1e-9);
    CHECK(v.lpNorm<1>() == doctest::Approx(*sol.objective_value));

    std::vector<Index> reduced_rows(static_cast<std::size_t>(once.reduced.reactions()));
    for (std::size_t k = 0; k < reduced_rows.size(); ++k) reduced_rows[k] = static_cast<Index>(k);
    CHECK(once.to_reduced(once.to_original(reduced_rows)) == reduced_rows);
  }
}

TEST_CASE("forced_nonzero_rows examples") {
  Matrix lo(2, 1), hi(2, 1);
  lo << 1, -5;
  hi << 2, 0;
  CHECK(forced_nonzero_rows(BoundsSet(lo, hi)) == std::vector<Index>{0});
  CHECK(forced_nonzero_rows(BoundsSet(-Matrix::Ones(3, 2), Matrix::Ones(3, 2))).empty());
  CHECK(forced_nonzero_rows(BoundsSet(row({0, 0.5}), row({0, 1}))) == std::vector<Index>{0});
}

TEST_CASE("sparsity_lower_bound examples") {
  const Matrix S = row({1, -1});
  const auto tight = make(S, row({1, 0}).transpose(), row({2, 2}).transpose());
  const auto lb = sparsity_lower_bound(tight, SupportSet{{0, 1}});
  CHECK(lb.bound == 2);
  CHECK(lb.certified == std::vector<Index>{0, 1});

  const auto loose = make(S, -Matrix::Ones(2, 1), Matrix::Ones(2, 1));
  CHECK(sparsity_lower_bound(loose, SupportSet{{0, 1}}).bound == 0);

  const auto forced = make(row({1, -1, -1}), row({1, -2, -2}).transpose(), row({2, 2, 2}).transpose());
  const auto lf = sparsity_lower_bound(forced, SupportSet{{0, 1}});
  CHECK(lf.bound >= 1);
  CHECK(lf.bound <= 2);
}

TEST_CASE("lower bound never exceeds the achieved score") {
  WeightRuleConfig cfg;
  for (const auto& model : testing::single_corpus(5, 16)) {
    const auto res = sparse_flux(model, cfg, forced_nonzero_rows(model.bounds));
    const auto lb = sparsity_lower_bound(model, support(res.solution.values));
    CHECK(lb.bound <= res.score);
    CHECK(lb.inconclusive.empty());
  }
}
