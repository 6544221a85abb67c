#pragma once

#include <optional>
#include <string>
#include <vector>

#include "esdr/config.hpp"
#include "esdr/dataset.hpp"
#include "esdr/families.hpp"
#include "esdr/pipeline.hpp"
#include "esdr/subspace.hpp"

namespace esdr {

struct CvScore {
  double value = 0.0;
  double bandwidth = 0.0;
  Index fallbacks = 0;  ///< rows predicted by the leave-one-out mean for lack of neighbours
};

/// Leave-one-out cross-validation error of the panel smoothed on B^T X with a
/// d-dimensional kernel at bandwidth hbar0 n^{-1/(d+4)}; without a basis the
/// leave-one-out mean is the predictor. Normalized by n times the panel width.
CvScore cv_score(const Matrix& x, const ResponsePanel& panel, const std::optional<Basis>& basis,
                 const FitConfig& cfg);

/// Fits the refined ensemble at dimension d (d >= 1) and returns its CV value.
CvScore cv_value(const Matrix& x, const ResponsePanel& panel, Index d, const FitConfig& cfg);

struct CvCurve {
  std::vector<double> values;      ///< CV(d), d = 0..d_max; +inf marks a failed fit
  std::vector<double> bandwidths;  ///< hbar_d (0 for d = 0)
  std::vector<std::optional<Basis>> bases;  ///< fitted basis per d on the working scale
  std::vector<std::string> flags;
  Index d_hat = 0;
};

/// Smallest d whose value is within 1e-12 of the minimum.
Index argmin_dimension(const std::vector<double>& values);

inline Index default_max_dimension(Index p) { return std::min<Index>(p, 6); }

/// Cross-validated structural dimension on a prepared working-scale panel.
CvCurve estimate_dimension(const Matrix& x, const ResponsePanel& panel, const FitConfig& cfg, Index d_max);

/// Full pipeline: standardize, build the family, then estimate the dimension.
CvCurve estimate_dimension(const Dataset& data, const FamilySpec& family, const FitConfig& cfg, Index d_max);

}  // namespace esdr
