#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "esdr/config.hpp"
#include "esdr/dataset.hpp"
#include "esdr/estimators.hpp"
#include "esdr/families.hpp"

namespace esdr {

enum class Method { opg, mave, rmave };

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view name);
std::optional<FamilyKind> parse_family(std::string_view name);

/// Which family to build and how large. The ensemble size comes from FitConfig::m
/// (frequency count, slice count, maximum polynomial degree, kde member count);
/// Box-Cox uses its fixed exponent grid and Haar uses `haar_level`.
struct FamilySpec {
  FamilyKind kind = FamilyKind::characteristic;
  int haar_level = 3;
  std::vector<double> boxcox_grid = default_boxcox_grid();
};

struct PreparedFamily {
  FunctionFamily family;
  Matrix y;  ///< responses as evaluated (shifted for Box-Cox when needed)
  std::vector<std::string> notes;
};

/// Builds the family for these responses. Characteristic frequencies come
/// from a stream derived from cfg.seed; Box-Cox on nonpositive responses
/// applies shift_nonneg and records a note.
PreparedFamily prepare_family(const FamilySpec& spec, const Matrix& y, const FitConfig& cfg);

/// Predictors on the scale the estimators see, plus the record to map back.
Standardized working_predictors(const Matrix& x, const FitConfig& cfg);

EnsembleFit run_method(Method method, const Matrix& x, const ResponsePanel& panel, Index d, const FitConfig& cfg);

struct FitResult {
  EnsembleFit fit;   ///< basis on the working (possibly standardized) scale
  Basis basis;       ///< basis on the original predictor scale
  StandardizeRecord record;
  Index panel_width = 0;
  std::vector<std::string> notes;
};

/// Standardize, build and evaluate the family, then run the estimator chain.
FitResult fit_dataset(const Dataset& data, const FamilySpec& family, Method method, Index d, const FitConfig& cfg);

}  // namespace esdr
