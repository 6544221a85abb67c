#pragma once

#include <vector>

#include "esdr/config.hpp"
#include "esdr/linalg.hpp"
#include "esdr/subspace.hpp"

namespace esdr {

/// Univariate profile K0(u): biweight (15/16)(1-u^2)^2 on |u|<=1, or the N(0,1) density.
double kernel_profile(Kernel kernel, double u);

/// K_h(v) = h^{-dim} K0(||v|| / h), evaluated from the squared norm.
double scaled_kernel(Kernel kernel, double squared_norm, double h, Index dim);

/// Column-normalized local weights with trimming.
///
/// Column j holds w_ij = K_h(U_i - U_j) / sum_u K_h(U_u - U_j); the diagonal
/// term is included. A column whose only positive kernel value is its own
/// diagonal (or whose denominator underflows) is `isolated`: it becomes the
/// indicator of j and its trimming weight is zero.
struct WeightPlan {
  Matrix w;                   ///< n x n, columns sum to 1
  Vector rho;                 ///< trimming weights in [0, 1]
  Vector density;             ///< n^{-1} sum_i K_h(U_i - U_j)
  std::vector<char> isolated;
  double h = 0.0;
  Index dim = 0;              ///< dimension of the smoothing coordinates

  Index n() const { return w.rows(); }
  Index isolated_count() const;
};

/// Weights from the full p-dimensional predictor distances.
WeightPlan full_weights(const Matrix& x, double h, Kernel kernel, double trim_quantile = 0.05);

/// Weights from the reduced coordinates B^T X_i with a d-dimensional kernel.
WeightPlan refined_weights(const Matrix& x, const Basis& basis, double h, Kernel kernel,
                           double trim_quantile = 0.05);

/// Trimming weights rho_j from local density estimates.
///
/// v0 is the empirical `quantile` of the estimates (linear interpolation).
/// rho = 0 where density <= v0, rising along x^2 (3 - 2x), x = (density - v0)/v0,
/// to 1 at 2 v0. Ties at v0 are trimmed. If that would trim every point (all
/// estimates equal) no trimming is applied, and a zero quantile disables trimming.
Vector trimming(const Vector& density, double quantile);

double bandwidth_initial(Index n, Index p, double c0);
double bandwidth_final(Index n, Index d, double hbar0);
/// h_r = max(varsigma h_{r-1}, hbar), r = 1, 2, ..., stopping at the first term equal to hbar.
std::vector<double> bandwidth_schedule(double h0, double hbar, double varsigma);

}  // namespace esdr
