#include "corpus.hpp"

#include "sparseflux/errors.hpp"
#include "sparseflux/lp.hpp"
#include "sparseflux/simplex.hpp"

#include <doctest.h>

#include <cmath>

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

LinearProgram one_var(double c, double lo, double hi, bool with_equality) {
  LinearProgram lp;
  lp.objective = vec({c});
  lp.lo = vec({lo});
  lp.hi = vec({hi});
  if (with_equality) {
    lp.A.resize(1, 1);
    lp.A.insert(0, 0) = 1.0;
    lp.b = vec({1.0});
  } else {
    lp.A.resize(0, 1);
    lp.b = Vector(0);
  }
  return lp;
}

}  // namespace

TEST_CASE("solve_lp examples") {
  const auto fixed = solve_lp(one_var(0.0, 0.0, 2.0, true));
  REQUIRE(fixed.optimal());
  CHECK((*fixed.x)(0) == doctest::Approx(1.0));
  CHECK(*fixed.objective_value == 0.0);

  CHECK(solve_lp(one_var(1.0, 3.0, 2.0, false)).status == SolveStatus::Infeasible);
  CHECK(solve_lp(one_var(-1.0, 0.0, INFINITY, false)).status == SolveStatus::Unbounded);
}

TEST_CASE("solve_lp rejects malformed programs") {
  LinearProgram lp = one_var(1.0, 0.0, 1.0, false);
  lp.lo = Vector(2);
  CHECK_THROWS_AS(solve_lp(lp), Error);
}

TEST_CASE("backend failures surface as NumericalFailure") {
  struct Throwing final : LpBackend {
    SolveResult solve(const LinearProgram&) const override { throw std::runtime_error("boom"); }
    std::string name() const override { return "throwing"; }
  };
  struct Lying final : LpBackend {
    SolveResult solve(const LinearProgram& lp) const override {
      SolveResult r;
      r.status = SolveStatus::Optimal;
      r.x = Vector::Constant(lp.variables(), 5.0);
      r.objective_value = 0.0;
      return r;
    }
    std::string name() const override { return "lying"; }
  };
  SolverSettings s;
  s.backend = std::make_shared<Throwing>();
  CHECK(solve_lp(one_var(0.0, 0.0, 2.0, true), s).status == SolveStatus::NumericalFailure);
  s.backend = std::make_shared<Lying>();
  const auto r = solve_lp(one_var(0.0, 0.0, 2.0, true), s);
  CHECK(r.status == SolveStatus::NumericalFailure);
  CHECK_FALSE(r.x.has_value());
}

TEST_CASE("check_feasibility examples") {
  const auto S = balance_row();
  CHECK(check_feasibility(S, vec({0, 0}), vec({1, 1})) == Feasibility::Feasible);
  CHECK(check_feasibility(S, vec({1, 0}), vec({2, 0})) == Feasibility::Infeasible);
  CHECK(check_feasibility(S, vec({1, 0}), vec({2, 2})) == Feasibility::Feasible);
  const auto w = find_feasible(S, vec({1, 0}), vec({2, 2}));
  REQUIRE(w.optimal());
  CHECK((*w.x)(0) == doctest::Approx((*w.x)(1)));
  CHECK_THROWS_AS(check_feasibility(S, vec({0}), vec({1})), Error);
}

TEST_CASE("min_weighted_l1 examples against vertex enumeration") {
  const auto S = balance_row();
  const Vector l = vec({1, 0}), u = vec({2, 2}), w = vec({1, 1});
  const auto on_oracle = testing::vertex_min_weighted_l1(S.dense(), l, u, w, true);
  const auto off_oracle = testing::vertex_min_weighted_l1(S.dense(), l, u, w, false);
  REQUIRE(on_oracle);
  REQUIRE(off_oracle);
  CHECK(on_oracle->objective == 2.0);
  CHECK(off_oracle->objective == 1.0);

  const auto on = min_weighted_l1(S, l, u, w, true);
  REQUIRE(on.optimal());
  CHECK(*on.objective_value == doctest::Approx(on_oracle->objective));
  CHECK((*on.x)(0) == doctest::Approx(1.0));
  CHECK((*on.x)(1) == doctest::Approx(1.0));

  const auto off = min_weighted_l1(S, l, u, w, false);
  REQUIRE(off.optimal());
  CHECK(*off.objective_value == doctest::Approx(off_oracle->objective));
  CHECK((*off.x)(0) == doctest::Approx(1.0));
  CHECK((*off.x)(1) == doctest::Approx(0.0));

  const auto zero = min_weighted_l1(S, l, u, Vector::Zero(2), true);
  REQUIRE(zero.optimal());
  CHECK(*zero.objective_value == 0.0);

  CHECK_THROWS_AS(min_weighted_l1(S, l, u, vec({-1, 1}), true), Error);
}

TEST_CASE("min_weighted_l1 with a right-hand side") {
  // v0 - v1 = 1 with v in [-3, 3]^2: cheapest is one of the two unit moves.
  const auto S = balance_row();
  const auto r = min_weighted_l1(S, vec({-3, -3}), vec({3, 3}), vec({1, 2}), true, {}, vec({1}));
  REQUIRE(r.optimal());
  CHECK(*r.objective_value == doctest::Approx(1.0));
  CHECK((*r.x)(0) == doctest::Approx(1.0));
}

TEST_CASE("weighted l1 agrees with vertex enumeration on random instances") {
  testing::CorpusRng rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const Index m = rng.integer(1, 3), n = rng.integer(m + 1, 6);
    Matrix S(m, n);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < n; ++j) S(i, j) = static_cast<double>(rng.integer(-2, 2));
    if (Eigen::FullPivLU<Matrix>(S).rank() < m) continue;
    Vector l(n), u(n), w(n);
    for (Index i = 0; i < n; ++i) {
      l(i) = std::round(rng.uniform(-3.0, 1.0) * 4) / 4;
      u(i) = l(i) + std::round(rng.uniform(0.0, 3.0) * 4) / 4;
      w(i) = rng.coin(0.2) ? 0.0 : rng.uniform(0.1, 5.0);
    }
    for (bool eq : {true, false}) {
      const auto oracle = testing::vertex_min_weighted_l1(S, l, u, w, eq);
      const auto r = min_weighted_l1(StoichiometricMatrix(S), l, u, w, eq);
      if (!oracle) {
        CHECK(r.status == SolveStatus::Infeasible);
        continue;
      }
      REQUIRE(r.optimal());
      CHECK(*r.objective_value == doctest::Approx(oracle->objective).epsilon(1e-9));
      if (eq) CHECK((S * *r.x).cwiseAbs().maxCoeff() <= 1e-8 * (1 + S.cwiseAbs().maxCoeff()));
      CHECK(((l - *r.x).array() <= 1e-9).all());
      CHECK(((*r.x - u).array() <= 1e-9).all());
      ++checked;
    }
  }
  CHECK(checked > 40);
}

TEST_CASE("weight scaling and equality monotonicity") {
  const auto corpus = testing::single_corpus(7, 12);
  for (const auto& model : corpus) {
    const Vector l = model.bounds.lower(0), u = model.bounds.upper(0);
    Vector w(model.reactions());
    for (Index i = 0; i < w.size(); ++i) w(i) = 0.5 + 0.25 * static_cast<double>(i % 5);

    const auto base = min_weighted_l1(model.S, l, u, w, true);
    REQUIRE(base.optimal());
    for (double alpha : {2.0, 0.5, 8.0}) {
      const auto scaled = min_weighted_l1(model.S, l, u, alpha * w, true);
      REQUIRE(scaled.optimal());
      CHECK(*scaled.objective_value == doctest::Approx(alpha * *base.objective_value).epsilon(1e-12));
      // Power-of-two scaling is exact in floating point, so the pivots match too.
      CHECK(*scaled.x == *base.x);
    }
    const auto relaxed = min_weighted_l1(model.S, l, u, w, false);
    REQUIRE(relaxed.optimal());
    CHECK(*base.objective_value >= *relaxed.objective_value - 1e-12);

    const auto plain = min_weighted_l1(model.S, l, u, Vector::Ones(model.reactions()), true);
    REQUIRE(plain.optimal());
    CHECK(*plain.objective_value == doctest::Approx(plain.x->lpNorm<1>()));
  }
}

TEST_CASE("simplex backends are interchangeable") {
  const auto dantzig = make_backend("simplex");
  const auto bland = make_backend("simplex-bland");
  CHECK(dantzig->name() == "simplex");
  CHECK(bland->name() == "simplex-bland");
  CHECK_THROWS_AS(make_backend("cplex"), Error);

  const auto corpus = testing::single_corpus(99, 10);
  for (const auto& model : corpus) {
    SolverSettings a, b;
    a.backend = dantzig;
    b.backend = bland;
    const Vector w = Vector::Ones(model.reactions());
    const auto ra = min_weighted_l1(model.S, model.bounds.lower(0), model.bounds.upper(0), w, true, a);
    const auto rb = min_weighted_l1(model.S, model.bounds.lower(0), model.bounds.upper(0), w, true, b);
    REQUIRE(ra.optimal());
    REQUIRE(rb.optimal());
    CHECK(*ra.objective_value == doctest::Approx(*rb.objective_value).epsilon(1e-9));
  }
}

TEST_CASE("simplex handles free variables and degenerate rows") {
  // x0 free, x1 in [0, 4]: minimize x1 subject to x0 + x1 = 2, x0 - x1 = 0 (dup scaled row too).
  LinearProgram lp;
  lp.objective = vec({0.0, 1.0});
  lp.lo = vec({-INFINITY, 0.0});
  lp.hi = vec({INFINITY, 4.0});
  Matrix A(3, 2);
  A << 1, 1, 1, -1, 2, 2;
  lp.A = A.sparseView();
  lp.b = vec({2.0, 0.0, 4.0});
  const auto r = solve_lp(lp);
  REQUIRE(r.optimal());
  CHECK((*r.x)(0) == doctest::Approx(1.0));
  CHECK((*r.x)(1) == doctest::Approx(1.0));

  lp.b = vec({2.0, 0.0, 5.0});
  CHECK(solve_lp(lp).status == SolveStatus::Infeasible);
}
