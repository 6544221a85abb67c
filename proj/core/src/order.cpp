#include "esdr/order.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "esdr/error.hpp"
#include "esdr/estimators.hpp"
#include "esdr/smoothing.hpp"

namespace esdr {

CvScore cv_score(const Matrix& x, const ResponsePanel& panel, const std::optional<Basis>& basis,
                 const FitConfig& cfg) {
  const Index n = x.rows();
  const Index q = panel.width();
  if (panel.n() != n) throw Error("panel and predictors disagree on n");
  if (n < 2) throw Error("cross validation needs n >= 2");
  const Matrix& g = panel.values;
  const Vector column_sums = g.colwise().sum().transpose();

  CvScore score;
  double total = 0.0;
  if (!basis) {
    for (Index j = 0; j < n; ++j) {
      const Vector loo = (column_sums - g.row(j).transpose()) / static_cast<double>(n - 1);
      total += (g.row(j).transpose() - loo).squaredNorm();
    }
    score.value = total / static_cast<double>(n * q);
    return score;
  }

  const Index d = basis->d();
  if (basis->p() != x.cols()) throw Error("basis row count does not match the number of predictors");
  score.bandwidth = bandwidth_final(n, d, cfg.hbar0);
  const Matrix u = x * basis->matrix();
  Vector weights(n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i)
      weights(i) = i == j ? 0.0 : scaled_kernel(cfg.kernel, (u.row(i) - u.row(j)).squaredNorm(), score.bandwidth, d);
    const double denom = weights.sum();
    Vector fitted;
    if (denom > 0.0 && std::isfinite(denom)) {
      fitted = g.transpose() * weights / denom;
    } else {
      fitted = (column_sums - g.row(j).transpose()) / static_cast<double>(n - 1);
      ++score.fallbacks;
    }
    total += (g.row(j).transpose() - fitted).squaredNorm();
  }
  score.value = total / static_cast<double>(n * q);
  return score;
}

CvScore cv_value(const Matrix& x, const ResponsePanel& panel, Index d, const FitConfig& cfg) {
  if (d == 0) return cv_score(x, panel, std::nullopt, cfg);
  const EnsembleFit fit = rmave_ensemble(x, panel, d, cfg);
  return cv_score(x, panel, fit.basis, cfg);
}

Index argmin_dimension(const std::vector<double>& values) {
  Index best = 0;
  for (Index d = 1; d < static_cast<Index>(values.size()); ++d)
    if (values[static_cast<std::size_t>(d)] < values[static_cast<std::size_t>(best)] - 1e-12) best = d;
  return best;
}

CvCurve estimate_dimension(const Matrix& x, const ResponsePanel& panel, const FitConfig& cfg, Index d_max) {
  if (d_max < 0 || d_max > x.cols())
    throw Error("d_max must be in [0, p] (got " + std::to_string(d_max) + ")");
  CvCurve curve;
  curve.values.push_back(cv_score(x, panel, std::nullopt, cfg).value);
  curve.bandwidths.push_back(0.0);
  curve.bases.emplace_back(std::nullopt);
  for (Index d = 1; d <= d_max; ++d) {
    try {
      const EnsembleFit fit = rmave_ensemble(x, panel, d, cfg);
      const CvScore score = cv_score(x, panel, fit.basis, cfg);
      curve.values.push_back(score.value);
      curve.bandwidths.push_back(score.bandwidth);
      curve.bases.emplace_back(fit.basis);
      if (score.fallbacks > 0)
        curve.flags.push_back("d=" + std::to_string(d) + ": " + std::to_string(score.fallbacks) +
                              " rows fell back to the leave-one-out mean");
      if (!fit.converged) curve.flags.push_back("d=" + std::to_string(d) + ": fit did not converge");
    } catch (const Error& e) {
      curve.values.push_back(std::numeric_limits<double>::infinity());
      curve.bandwidths.push_back(bandwidth_final(x.rows(), d, cfg.hbar0));
      curve.bases.emplace_back(std::nullopt);
      curve.flags.push_back("d=" + std::to_string(d) + ": fit failed: " + e.what());
    }
  }
  curve.d_hat = argmin_dimension(curve.values);
  return curve;
}

CvCurve estimate_dimension(const Dataset& data, const FamilySpec& family, const FitConfig& cfg, Index d_max) {
  const auto errors = validate_config(cfg);
  if (!errors.empty()) throw Error("invalid configuration: " + errors.front());
  const Standardized work = working_predictors(data.x(), cfg);
  const PreparedFamily prepared = prepare_family(family, data.y(), cfg);
  const ResponsePanel panel = evaluate(prepared.family, prepared.y);
  return estimate_dimension(work.z, panel, cfg, d_max);
}

}  // namespace esdr
