#pragma once

#include <optional>
#include <string>
#include <vector>

#include "esdr/config.hpp"
#include "esdr/families.hpp"
#include "esdr/linalg.hpp"
#include "esdr/smoothing.hpp"
#include "esdr/subspace.hpp"

namespace esdr {

/// Local linear coefficients for every (j, panel column) pair.
struct LocalFit {
  Matrix intercepts;           ///< n x q, a_jk(l)
  std::vector<Matrix> slopes;  ///< n entries of dim x q, columns b_jk(l)
  Index ridged = 0;            ///< local systems that needed the ridge fallback

  Index dim() const { return slopes.empty() ? 0 : slopes.front().rows(); }
};

/// Local linear fits in the full predictor space (design (1, (X_i - X_j)^T)).
LocalFit opg_local_fits(const Matrix& x, const ResponsePanel& panel, const WeightPlan& plan,
                        double ridge = 1e-10);

/// Local step of the alternation: exact minimizer over (a, b) for a fixed basis,
/// design (1, (X_i - X_j)^T B). The local Gram matrix depends only on j and is
/// factored once per j for all panel columns.
LocalFit mave_step_local(const Matrix& x, const ResponsePanel& panel, const WeightPlan& plan, const Basis& basis,
                         double ridge = 1e-10);

/// Global step: exact minimizer over the p x d matrix B for fixed local fits,
/// solving the Kronecker-structured normal equations for vec(B). The result
/// is not orthonormalized.
Matrix mave_step_global(const Matrix& x, const ResponsePanel& panel, const WeightPlan& plan, const LocalFit& fits,
                        double ridge = 1e-10);

/// sum_{l,k,j,i} rho_j w_ij [G_i,(k,l) - a_jk(l) - b_jk(l)^T B^T (X_i - X_j)]^2
double objective(const Matrix& x, const ResponsePanel& panel, const WeightPlan& plan, const Matrix& b,
                 const LocalFit& fits);

struct EnsembleFit {
  explicit EnsembleFit(Basis b) : basis(std::move(b)) {}

  Basis basis;
  std::vector<double> objective_trace;   ///< after each local and each global step
  std::vector<double> outer_bandwidths;  ///< h_r per refined stage (pilot h for OPG/MAVE)
  Vector eigenvalues;                    ///< OPG matrix spectrum, descending (OPG only)
  bool converged = false;
  int inner_iterations = 0;
  int outer_iterations = 0;
  Index ridged_systems = 0;
  Index trimmed_points = 0;              ///< rho_j == 0 in the last weight plan
  std::vector<std::string> warnings;
};

EnsembleFit opg_ensemble(const Matrix& x, const ResponsePanel& panel, Index d, const FitConfig& cfg);

/// Alternating local/global least squares with full p-dimensional weights at h0.
/// Without `init` the OPG ensemble supplies the starting basis.
EnsembleFit mave_ensemble(const Matrix& x, const ResponsePanel& panel, Index d, const FitConfig& cfg,
                          const std::optional<Basis>& init = std::nullopt);

/// Refined ensemble: d-dimensional kernel on B^T X with bandwidths shrinking
/// from h0 to hbar by factor varsigma; the kernel basis is refreshed once per
/// stage. Without `init` the MAVE ensemble supplies the starting basis.
EnsembleFit rmave_ensemble(const Matrix& x, const ResponsePanel& panel, Index d, const FitConfig& cfg,
                           const std::optional<Basis>& init = std::nullopt);

}  // namespace esdr
