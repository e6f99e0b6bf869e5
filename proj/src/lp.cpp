#include "sparseflux/lp.hpp"

#include "sparseflux/errors.hpp"
#include "sparseflux/simplex.hpp"

#include <cmath>
#include <exception>

namespace sparseflux {

void LinearProgram::validate() const {
  const Index n = objective.size();
  if (A.cols() != n || lo.size() != n || hi.size() != n || b.size() != A.rows())
    throw Error(ErrorKind::Config, "malformed linear program: dimensions disagree");
}

std::shared_ptr<const LpBackend> make_backend(const std::string& name) {
  if (name == "simplex") return std::make_shared<BoundedSimplex>();
  if (name == "simplex-bland") {
    BoundedSimplex::Options opt;
    opt.pricing = BoundedSimplex::Pricing::Bland;
    return std::make_shared<BoundedSimplex>(opt);
  }
  throw Error(ErrorKind::Config, "unknown LP backend '" + name + "'");
}

std::shared_ptr<const LpBackend> default_backend() {
  static const auto backend = make_backend("simplex");
  return backend;
}

const LpBackend& SolverSettings::lp() const { return backend ? *backend : *default_backend(); }

SolveResult solve_lp(const LinearProgram& lp, const SolverSettings& settings) {
  lp.validate();
  SolveResult result;
  try {
    result = settings.lp().solve(lp);
  } catch (const std::exception&) {
    result = SolveResult{};
    result.status = SolveStatus::NumericalFailure;
    return result;
  }
  if (!result.optimal()) {
    result.x.reset();
    result.objective_value.reset();
    return result;
  }
  const bool shaped = result.x && result.x->size() == lp.variables() && result.x->allFinite();
  if (!shaped) {
    result.status = SolveStatus::NumericalFailure;
    result.x.reset();
    result.objective_value.reset();
    return result;
  }
  const Vector& x = *result.x;
  double a_scale = 0.0;
  for (Index k = 0; k < lp.A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(lp.A, k); it; ++it) a_scale = std::max(a_scale, std::abs(it.value()));
  const double residual = lp.constraints() ? (lp.A * x - lp.b).cwiseAbs().maxCoeff() : 0.0;
  const double violation =
      lp.variables() ? std::max((lp.lo - x).maxCoeff(), (x - lp.hi).maxCoeff()) : 0.0;
  if (residual > settings.tol.feasibility * (1.0 + a_scale) || violation > settings.tol.bound) {
    result.status = SolveStatus::NumericalFailure;
    result.x.reset();
    result.objective_value.reset();
  }
  return result;
}

namespace {

Vector rhs_or_zero(const StoichiometricMatrix& S, const Vector& rhs) {
  if (rhs.size() == 0) return Vector::Zero(S.rows());
  if (rhs.size() != S.rows()) throw Error(ErrorKind::Config, "right-hand side length does not match S");
  return rhs;
}

void check_lengths(const StoichiometricMatrix& S, const Vector& lower, const Vector& upper) {
  if (lower.size() != S.cols() || upper.size() != S.cols())
    throw Error(ErrorKind::Config, "bound vector length does not match the column count of S");
}

}  // namespace

SolveResult find_feasible(const StoichiometricMatrix& S, const Vector& lower, const Vector& upper,
                          const SolverSettings& settings, const Vector& rhs) {
  check_lengths(S, lower, upper);
  LinearProgram lp;
  lp.objective = Vector::Zero(S.cols());
  lp.A = S.matrix();
  lp.b = rhs_or_zero(S, rhs);
  lp.lo = lower;
  lp.hi = upper;
  return solve_lp(lp, settings);
}

Feasibility check_feasibility(const StoichiometricMatrix& S, const Vector& lower, const Vector& upper,
                              const SolverSettings& settings, const Vector& rhs) {
  const SolveResult r = find_feasible(S, lower, upper, settings, rhs);
  switch (r.status) {
    case SolveStatus::Optimal: return Feasibility::Feasible;
    case SolveStatus::Infeasible: return Feasibility::Infeasible;
    default: return Feasibility::NumericalFailure;
  }
}

SolveResult min_weighted_l1(const StoichiometricMatrix& S, const Vector& lower, const Vector& upper,
                            const Vector& weights, bool enforce_equality, const SolverSettings& settings,
                            const Vector& rhs) {
  check_lengths(S, lower, upper);
  const Index n = S.cols();
  if (weights.size() != n) throw Error(ErrorKind::Config, "weight vector length does not match S");
  if ((weights.array() < 0.0).any() || !weights.allFinite())
    throw Error(ErrorKind::Config, "weights must be finite and nonnegative");

  // Sign-definite boxes keep a single variable with cost +-w; boxes straddling
  // zero split v = p - q with p in [0, u] and q in [0, -l].
  struct Part {
    Index flux;
    double sign;
  };
  std::vector<Part> parts;
  std::vector<double> cost, lo, hi;
  for (Index i = 0; i < n; ++i) {
    const double l = lower(i), u = upper(i), w = weights(i);
    if (l >= 0.0) {
      parts.push_back({i, 1.0});
      cost.push_back(w);
      lo.push_back(l);
      hi.push_back(u);
    } else if (u <= 0.0) {
      parts.push_back({i, 1.0});
      cost.push_back(-w);
      lo.push_back(l);
      hi.push_back(u);
    } else {
      parts.push_back({i, 1.0});
      cost.push_back(w);
      lo.push_back(0.0);
      hi.push_back(u);
      parts.push_back({i, -1.0});
      cost.push_back(w);
      lo.push_back(0.0);
      hi.push_back(-l);
    }
  }

  const Index vars = static_cast<Index>(parts.size());
  LinearProgram lp;
  lp.objective = Eigen::Map<const Vector>(cost.data(), vars);
  lp.lo = Eigen::Map<const Vector>(lo.data(), vars);
  lp.hi = Eigen::Map<const Vector>(hi.data(), vars);
  if (enforce_equality) {
    std::vector<Eigen::Triplet<double>> trips;
    const SparseMatrix& s = S.matrix();
    for (Index k = 0; k < vars; ++k)
      for (SparseMatrix::InnerIterator it(s, parts[k].flux); it; ++it)
        trips.emplace_back(it.row(), k, parts[k].sign * it.value());
    lp.A.resize(S.rows(), vars);
    lp.A.setFromTriplets(trips.begin(), trips.end());
    lp.b = rhs_or_zero(S, rhs);
  } else {
    lp.A.resize(0, vars);
    lp.b = Vector(0);
  }

  SolveResult r = solve_lp(lp, settings);
  if (r.optimal()) {
    Vector v = Vector::Zero(n);
    for (Index k = 0; k < vars; ++k) v(parts[k].flux) += parts[k].sign * (*r.x)(k);
    r.objective_value = (weights.array() * v.array().abs()).sum();
    r.x = std::move(v);
  }
  return r;
}

}  // namespace sparseflux
