#include "esdr/estimators.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "esdr/error.hpp"

namespace esdr {
namespace {

struct Neighborhood {
  std::vector<Index> index;
  Vector weight;
};

// Nonzero entries of each weight column, in increasing i. Accumulations below
// always run in this order, which keeps every fit bit-reproducible.
std::vector<Neighborhood> neighborhoods(const WeightPlan& plan) {
  const Index n = plan.n();
  std::vector<Neighborhood> out(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    auto& nb = out[static_cast<std::size_t>(j)];
    std::vector<double> w;
    for (Index i = 0; i < n; ++i) {
      const double v = plan.w(i, j);
      if (v > 0.0) {
        nb.index.push_back(i);
        w.push_back(v);
      }
    }
    nb.weight = Eigen::Map<Vector>(w.data(), static_cast<Index>(w.size()));
  }
  return out;
}

// Weighted moments of one weight plan. Every alternation on the plan is an
// exact function of these sums, so an iteration costs O(n p q d) no matter
// how many neighbours each point has.
struct PlanMoments {
  const WeightPlan* plan;
  std::vector<Neighborhood> nbs;
  Vector mass;                   // sum_i w_ij
  Matrix first;                  // n x p, sum_i w_ij x_ij
  std::vector<Matrix> second;    // p x p, sum_i w_ij x_ij x_ij^T
  std::vector<Matrix> cross;     // p x q, sum_i w_ij x_ij g_i^T
  Matrix panel_sum;              // n x q, sum_i w_ij g_i
  Matrix panel_sq;               // n x q, sum_i w_ij g_i^2

  PlanMoments(const Matrix& x, const Matrix& g, const WeightPlan& p) : plan(&p), nbs(neighborhoods(p)) {
    const Index n = p.n();
    mass.resize(n);
    first.resize(n, x.cols());
    second.resize(static_cast<std::size_t>(n));
    cross.resize(static_cast<std::size_t>(n));
    panel_sum.resize(n, g.cols());
    panel_sq.resize(n, g.cols());
    for (Index j = 0; j < n; ++j) {
      const auto& nb = nbs[static_cast<std::size_t>(j)];
      const Matrix diffs = x(nb.index, Eigen::all).rowwise() - x.row(j);
      const Matrix local_g = g(nb.index, Eigen::all);
      const Matrix weighted = diffs.array().colwise() * nb.weight.array();
      mass(j) = nb.weight.sum();
      first.row(j) = weighted.colwise().sum();
      second[static_cast<std::size_t>(j)] = weighted.transpose() * diffs;
      cross[static_cast<std::size_t>(j)] = weighted.transpose() * local_g;
      panel_sum.row(j) = nb.weight.transpose() * local_g;
      panel_sq.row(j) = nb.weight.transpose() * local_g.array().square().matrix();
    }
  }

  // Normal equations of the local design (1, (X_i - X_j)^T B) at point j.
  void local_system(Index j, const Matrix& b, Matrix& gram, Matrix& rhs) const {
    const Index d = b.cols();
    const Vector bm = b.transpose() * first.row(j).transpose();
    gram.resize(d + 1, d + 1);
    gram(0, 0) = mass(j);
    gram.block(1, 0, d, 1) = bm;
    gram.block(0, 1, 1, d) = bm.transpose();
    gram.block(1, 1, d, d) = b.transpose() * second[static_cast<std::size_t>(j)] * b;
    rhs.resize(d + 1, panel_sum.cols());
    rhs.row(0) = panel_sum.row(j);
    rhs.bottomRows(d) = b.transpose() * cross[static_cast<std::size_t>(j)];
  }
};

void check_shapes(const Matrix& x, const ResponsePanel& panel, const WeightPlan& plan) {
  if (panel.n() != x.rows() || plan.n() != x.rows())
    throw Error("predictor, panel and weight plan disagree on n");
  if (panel.width() < 1) throw Error("response panel has no columns");
}

// Solves gram * out = rhs, falling back to gram + ridge * trace * I when the
// system is numerically singular. Returns true if the ridge was used.
bool solve_normal_equations(Matrix gram, const Matrix& rhs, double ridge, Matrix& out) {
  // LDLT::rcond() does not detect exactly singular systems, so judge conditioning by the pivots.
  Eigen::LDLT<Matrix> ldlt(gram);
  const auto pivots = ldlt.vectorD().array();
  if (ldlt.info() == Eigen::Success && pivots.minCoeff() > 1e-12 * pivots.maxCoeff()) {
    out = ldlt.solve(rhs);
    if (out.allFinite()) return false;
  }
  const double trace = gram.trace();
  if (!(trace > 0.0) || !std::isfinite(trace) || !(ridge > 0.0)) throw Error("singular normal equations");
  gram.diagonal().array() += ridge * trace;
  ldlt.compute(gram);
  if (ldlt.info() != Eigen::Success) throw Error("singular normal equations");
  out = ldlt.solve(rhs);
  if (!out.allFinite()) throw Error("singular normal equations");
  return true;
}

LocalFit local_fits(const Matrix& coords, const ResponsePanel& panel, const std::vector<Neighborhood>& nbs,
                    double ridge) {
  const Index n = coords.rows();
  const Index dim = coords.cols();
  const Index q = panel.width();
  LocalFit fits;
  fits.intercepts.resize(n, q);
  fits.slopes.resize(static_cast<std::size_t>(n));
  Matrix design;
  Matrix solution;
  for (Index j = 0; j < n; ++j) {
    const auto& nb = nbs[static_cast<std::size_t>(j)];
    const auto size = static_cast<Index>(nb.index.size());
    design.resize(size, dim + 1);
    design.col(0).setOnes();
    design.rightCols(dim) = coords(nb.index, Eigen::all).rowwise() - coords.row(j);
    const Matrix weighted = design.array().colwise() * nb.weight.array();
    const Matrix gram = weighted.transpose() * design;
    const Matrix rhs = weighted.transpose() * panel.values(nb.index, Eigen::all);
    try {
      if (solve_normal_equations(gram, rhs, ridge, solution)) ++fits.ridged;
    } catch (const Error&) {
      throw Error("local least squares unresolvable at j=" + std::to_string(j) + ", k=" +
                  std::to_string(panel.columns.empty() ? 0 : panel.columns.front().member));
    }
    fits.intercepts.row(j) = solution.row(0);
    fits.slopes[static_cast<std::size_t>(j)] = solution.bottomRows(dim);
  }
  return fits;
}

LocalFit local_fits_from_moments(const PlanMoments& mom, const Matrix& b, double ridge) {
  const Index n = mom.plan->n();
  const Index d = b.cols();
  LocalFit fits;
  fits.intercepts.resize(n, mom.panel_sum.cols());
  fits.slopes.resize(static_cast<std::size_t>(n));
  Matrix gram;
  Matrix rhs;
  Matrix solution;
  for (Index j = 0; j < n; ++j) {
    mom.local_system(j, b, gram, rhs);
    try {
      if (solve_normal_equations(gram, rhs, ridge, solution)) ++fits.ridged;
    } catch (const Error&) {
      throw Error("local least squares unresolvable at j=" + std::to_string(j) + ", k=0");
    }
    fits.intercepts.row(j) = solution.row(0);
    fits.slopes[static_cast<std::size_t>(j)] = solution.bottomRows(d);
  }
  return fits;
}

Matrix global_step(const PlanMoments& mom, const LocalFit& fits, double ridge) {
  const WeightPlan& plan = *mom.plan;
  const Index n = plan.n();
  const Index p = mom.first.cols();
  const Index d = fits.dim();
  if (d < 1 || static_cast<Index>(fits.slopes.size()) != n || fits.intercepts.rows() != n ||
      fits.intercepts.cols() != mom.panel_sum.cols())
    throw Error("local fits do not match the panel");

  // sum rho_j w_ij (b (x) x_ij)(b (x) x_ij)^T = sum_j rho_j (sum_k b b^T) (x) (sum_i w_ij x_ij x_ij^T)
  Matrix lhs = Matrix::Zero(p * d, p * d);
  Matrix rhs = Matrix::Zero(p, d);
  for (Index j = 0; j < n; ++j) {
    const double rho = plan.rho(j);
    if (rho <= 0.0) continue;
    const auto js = static_cast<std::size_t>(j);
    const Matrix& slopes = fits.slopes[js];
    const Matrix slope_outer = slopes * slopes.transpose();
    for (Index c2 = 0; c2 < d; ++c2)
      for (Index c1 = 0; c1 < d; ++c1)
        lhs.block(c1 * p, c2 * p, p, p) += (rho * slope_outer(c1, c2)) * mom.second[js];
    // sum_i w_ij x_ij (g_i - a_j)^T = cross_j - first_j a_j^T
    const Matrix centered = mom.cross[js] - mom.first.row(j).transpose() * fits.intercepts.row(j);
    rhs.noalias() += rho * (centered * slopes.transpose());
  }
  Matrix solution;
  const Eigen::Map<const Vector> rhs_vec(rhs.data(), p * d);
  solve_normal_equations(lhs, Matrix(rhs_vec), ridge, solution);
  return Eigen::Map<const Matrix>(solution.data(), p, d);
}

// Objective through the moments: per j, sum w g^2 - 2 tr(Theta^T R) + tr(Theta^T G Theta).
double objective_from_moments(const PlanMoments& mom, const Matrix& b, const LocalFit& fits) {
  const WeightPlan& plan = *mom.plan;
  const Index d = b.cols();
  if (fits.dim() != d) throw Error("basis and local fits disagree on dimensions");
  double total = 0.0;
  Matrix gram;
  Matrix rhs;
  Matrix theta(d + 1, mom.panel_sum.cols());
  for (Index j = 0; j < plan.n(); ++j) {
    const double rho = plan.rho(j);
    if (rho <= 0.0) continue;
    mom.local_system(j, b, gram, rhs);
    theta.row(0) = fits.intercepts.row(j);
    theta.bottomRows(d) = fits.slopes[static_cast<std::size_t>(j)];
    const double value = mom.panel_sq.row(j).sum() - 2.0 * (theta.array() * rhs.array()).sum() +
                         (theta.array() * (gram * theta).array()).sum();
    total += rho * std::max(value, 0.0);
  }
  return total;
}

double objective_direct(const Matrix& x, const ResponsePanel& panel, const WeightPlan& plan,
                        const std::vector<Neighborhood>& nbs, const Matrix& b, const LocalFit& fits) {
  if (b.rows() != x.cols() || b.cols() != fits.dim()) throw Error("basis and local fits disagree on dimensions");
  const Matrix coords = x * b;
  double total = 0.0;
  for (Index j = 0; j < x.rows(); ++j) {
    const double rho = plan.rho(j);
    if (rho <= 0.0) continue;
    const auto& nb = nbs[static_cast<std::size_t>(j)];
    const Matrix reduced = coords(nb.index, Eigen::all).rowwise() - coords.row(j);
    const Matrix resid = (panel.values(nb.index, Eigen::all).rowwise() - fits.intercepts.row(j)) -
                         reduced * fits.slopes[static_cast<std::size_t>(j)];
    total += rho * nb.weight.dot(resid.rowwise().squaredNorm());
  }
  return total;
}

struct StageResult {
  Basis basis;
  bool converged = false;
  int iterations = 0;
};

// Alternates the local and global steps on a fixed weight plan.
StageResult alternate(const Matrix& x, const ResponsePanel& panel, const WeightPlan& plan, const Basis& start,
                      const FitConfig& cfg, int max_iterations, EnsembleFit& record) {
  Basis current = start;
  Basis best = start;
  double best_objective = std::numeric_limits<double>::infinity();
  StageResult result{start};
  const PlanMoments moments(x, panel.values, plan);
  for (int it = 1; it <= max_iterations; ++it) {
    result.iterations = it;
    const LocalFit fits = local_fits_from_moments(moments, current.matrix(), cfg.ridge);
    record.ridged_systems += fits.ridged;
    const double local_value = objective_from_moments(moments, current.matrix(), fits);
    record.objective_trace.push_back(local_value);
    if (local_value < best_objective) {
      best_objective = local_value;
      best = current;
    }
    Matrix raw;
    try {
      raw = global_step(moments, fits, cfg.ridge);
    } catch (const Error& e) {
      record.warnings.emplace_back(std::string("global step stopped: ") + e.what());
      break;
    }
    record.objective_trace.push_back(objective_from_moments(moments, raw, fits));
    std::optional<Basis> next;
    try {
      next = orthonormalize(raw);
    } catch (const Error& e) {
      record.warnings.emplace_back(std::string("global step stopped: ") + e.what());
      break;
    }
    const double change = distance(current, *next);
    current = *next;
    if (change < cfg.tol) {
      result.converged = true;
      break;
    }
  }
  if (!result.converged) {
    // The last orthonormalized iterate has not been scored yet.
    try {
      const LocalFit fits = local_fits_from_moments(moments, current.matrix(), cfg.ridge);
      if (objective_from_moments(moments, current.matrix(), fits) <= best_objective) best = current;
    } catch (const Error&) {
    }
  }
  result.basis = result.converged ? current : best;
  return result;
}

void require_dimension(Index d, Index p) {
  if (d < 1 || d > p)
    throw Error("working dimension must satisfy 1 <= d <= p (d=" + std::to_string(d) + ", p=" + std::to_string(p) + ")");
}

void require_valid(const FitConfig& cfg) {
  const auto errors = validate_config(cfg);
  if (!errors.empty()) throw Error("invalid configuration: " + errors.front());
}

}  // namespace

LocalFit opg_local_fits(const Matrix& x, const ResponsePanel& panel, const WeightPlan& plan, double ridge) {
  check_shapes(x, panel, plan);
  return local_fits(x, panel, neighborhoods(plan), ridge);
}

LocalFit mave_step_local(const Matrix& x, const ResponsePanel& panel, const WeightPlan& plan, const Basis& basis,
                         double ridge) {
  check_shapes(x, panel, plan);
  if (basis.p() != x.cols()) throw Error("basis row count does not match the number of predictors");
  return local_fits(x * basis.matrix(), panel, neighborhoods(plan), ridge);
}

Matrix mave_step_global(const Matrix& x, const ResponsePanel& panel, const WeightPlan& plan, const LocalFit& fits,
                        double ridge) {
  check_shapes(x, panel, plan);
  return global_step(PlanMoments(x, panel.values, plan), fits, ridge);
}

double objective(const Matrix& x, const ResponsePanel& panel, const WeightPlan& plan, const Matrix& b,
                 const LocalFit& fits) {
  check_shapes(x, panel, plan);
  return objective_direct(x, panel, plan, neighborhoods(plan), b, fits);
}

EnsembleFit opg_ensemble(const Matrix& x, const ResponsePanel& panel, Index d, const FitConfig& cfg) {
  require_valid(cfg);
  require_dimension(d, x.cols());
  const Index n = x.rows();
  const Index p = x.cols();
  const double h0 = bandwidth_initial(n, p, cfg.c0);
  const WeightPlan plan = full_weights(x, h0, cfg.kernel, cfg.trim_quantile);
  const LocalFit fits = opg_local_fits(x, panel, plan, cfg.ridge);

  Matrix opg = Matrix::Zero(p, p);
  for (Index j = 0; j < n; ++j) {
    if (plan.rho(j) <= 0.0) continue;
    const Matrix& slopes = fits.slopes[static_cast<std::size_t>(j)];
    opg.noalias() += plan.rho(j) * (slopes * slopes.transpose());
  }
  opg = 0.5 * (opg + opg.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(opg);
  const Vector ascending = eig.eigenvalues();
  Vector descending = ascending.reverse();
  Matrix top(p, d);
  for (Index c = 0; c < d; ++c) top.col(c) = eig.eigenvectors().col(p - 1 - c);

  EnsembleFit out{basis_from_orthonormal_columns(std::move(top))};
  out.eigenvalues = descending;
  out.outer_bandwidths.push_back(h0);
  out.ridged_systems = fits.ridged;
  out.trimmed_points = (plan.rho.array() <= 0.0).count();
  out.converged = true;
  const double scale = std::max(1.0, std::abs(descending(0)));
  if (descending(0) <= 0.0) out.warnings.emplace_back("OPG matrix is zero; basis is arbitrary");
  if (d < p && std::abs(descending(d - 1) - descending(d)) <= 1e-12 * scale)
    out.warnings.emplace_back("eigen-gap degenerate");
  return out;
}

EnsembleFit mave_ensemble(const Matrix& x, const ResponsePanel& panel, Index d, const FitConfig& cfg,
                          const std::optional<Basis>& init) {
  require_valid(cfg);
  require_dimension(d, x.cols());
  EnsembleFit out{init ? *init : opg_ensemble(x, panel, d, cfg).basis};
  if (out.basis.p() != x.cols() || out.basis.d() != d) throw Error("initial basis has the wrong shape");
  const double h0 = bandwidth_initial(x.rows(), x.cols(), cfg.c0);
  const WeightPlan plan = full_weights(x, h0, cfg.kernel, cfg.trim_quantile);
  out.outer_bandwidths.push_back(h0);
  out.trimmed_points = (plan.rho.array() <= 0.0).count();
  const StageResult stage = alternate(x, panel, plan, out.basis, cfg, cfg.max_inner_iter, out);
  out.basis = stage.basis;
  out.converged = stage.converged;
  out.inner_iterations = stage.iterations;
  out.outer_iterations = 1;
  return out;
}

EnsembleFit rmave_ensemble(const Matrix& x, const ResponsePanel& panel, Index d, const FitConfig& cfg,
                           const std::optional<Basis>& init) {
  require_valid(cfg);
  require_dimension(d, x.cols());
  EnsembleFit out{init ? *init : mave_ensemble(x, panel, d, cfg).basis};
  if (out.basis.p() != x.cols() || out.basis.d() != d) throw Error("initial basis has the wrong shape");
  const Index n = x.rows();
  double h = bandwidth_initial(n, x.cols(), cfg.c0);
  const double hbar = bandwidth_final(n, d, cfg.hbar0);
  for (int r = 1; r <= cfg.max_outer_iter; ++r) {
    h = std::max(cfg.varsigma * h, hbar);
    const WeightPlan plan = refined_weights(x, out.basis, h, cfg.kernel, cfg.trim_quantile);
    out.outer_bandwidths.push_back(h);
    out.trimmed_points = (plan.rho.array() <= 0.0).count();
    const StageResult stage = alternate(x, panel, plan, out.basis, cfg, cfg.stage_iterations, out);
    out.inner_iterations += stage.iterations;
    out.outer_iterations = r;
    const double change = distance(out.basis, stage.basis);
    out.basis = stage.basis;
    if (h <= hbar && change < cfg.tol) {
      out.converged = true;
      break;
    }
  }
  if (!out.converged) out.warnings.emplace_back("refined ensemble did not converge within max_outer_iter");
  return out;
}

}  // namespace esdr
