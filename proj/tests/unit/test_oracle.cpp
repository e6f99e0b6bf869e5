#include "corpus.hpp"

#include "sparseflux/errors.hpp"
#include "sparseflux/oracle.hpp"
#include "sparseflux/preprocess.hpp"

#include <doctest.h>

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

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Parse;
}

}  // namespace

TEST_CASE("min l0 examples") {
  const auto S = balance_row();
  const auto r = brute_force_min_l0(S, vec({1, 0}), vec({2, 2}));
  CHECK(r.optimum == 2);
  REQUIRE(r.witnesses.size() == 1);
  CHECK(r.witnesses[0].indices == std::vector<Index>{0, 1});
  // Four patterns exist; patterns that pin a forced row are rejected without an LP.
  CHECK(r.solves >= 1);
  CHECK(r.solves <= 4);

  const auto zero = brute_force_min_l0(S, vec({-1, -1}), vec({1, 1}));
  CHECK(zero.optimum == 0);
  REQUIRE(zero.witnesses.size() == 1);
  CHECK(zero.witnesses[0].empty());

  CHECK(kind_of([&] { brute_force_min_l0(S, vec({1, 0}), vec({2, 0})); }) == ErrorKind::Infeasible);
  CHECK(kind_of([&] { brute_force_min_l0(S, vec({0, 0}), vec({1, 1}), 1); }) == ErrorKind::Refused);
}

TEST_CASE("witnesses are feasible supports") {
  for (const auto& model : testing::single_corpus(40, 12)) {
    const auto r = brute_force_min_l0(model.S, model.bounds.lower(0), model.bounds.upper(0));
    CHECK(!r.witnesses.empty());
    for (const auto& w : r.witnesses) {
      CHECK(static_cast<Index>(w.size()) == r.optimum);
      Vector lo = Vector::Zero(model.reactions()), hi = Vector::Zero(model.reactions());
      for (Index i : w.indices) {
        lo(i) = model.bounds.lower(0)(i);
        hi(i) = model.bounds.upper(0)(i);
      }
      CHECK(check_feasibility(model.S, lo, hi) == Feasibility::Feasible);
    }
  }
}

TEST_CASE("min l20 collapses to min l0 for one column") {
  for (const auto& model : testing::single_corpus(41, 8)) {
    const auto a = brute_force_min_l0(model.S, model.bounds.lower(0), model.bounds.upper(0));
    const auto b = brute_force_min_l20(model);
    CHECK(a.optimum == b.optimum);
    CHECK(a.witnesses == b.witnesses);
  }
}

TEST_CASE("joint optimum dominates each column") {
  for (const auto& model : testing::joint_corpus(42, 8)) {
    const auto joint = brute_force_min_l20(model);
    for (Index j = 0; j < model.scenarios(); ++j) {
      const auto single = brute_force_min_l0(model.S, model.bounds.lower(j), model.bounds.upper(j));
      CHECK(joint.optimum >= single.optimum);
    }
  }
  const auto zero = brute_force_min_l20(FluxModel(balance_row(), BoundsSet(-Matrix::Ones(2, 3), Matrix::Ones(2, 3))));
  CHECK(zero.optimum == 0);
}

TEST_CASE("budgeted oracle") {
  for (const auto& model : testing::joint_corpus(43, 8)) {
    const Index c = model.scenarios();
    CHECK(brute_force_budgeted(model, 0).optimum == brute_force_min_l20(model).optimum);
    CHECK(brute_force_budgeted(model, c).optimum ==
          static_cast<Index>(forced_nonzero_rows(model.bounds).size()));
    Index previous = brute_force_budgeted(model, 0).optimum;
    for (Index K = 1; K <= c; ++K) {
      const Index now = brute_force_budgeted(model, K).optimum;
      CHECK(now <= previous);
      previous = now;
    }
  }
  const FluxModel wide(balance_row(), BoundsSet(Matrix::Zero(2, 7), Matrix::Ones(2, 7)));
  CHECK(kind_of([&] { brute_force_budgeted(wide, 1); }) == ErrorKind::Refused);
}

TEST_CASE("optimum is invariant under permutation") {
  testing::CorpusRng rng(44);
  for (const auto& model : testing::joint_corpus(45, 8)) {
    const Index n = model.reactions();
    std::vector<Index> perm(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) perm[i] = i;
    for (Index k = n - 1; k > 0; --k) std::swap(perm[k], perm[rng.integer(0, k)]);
    const FluxModel shuffled(model.S.select_columns(perm), model.bounds.select_rows(perm));
    CHECK(brute_force_min_l20(shuffled).optimum == brute_force_min_l20(model).optimum);
  }
}
