#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace esdr {

enum class Kernel { biweight, gaussian };

std::string_view to_string(Kernel kernel);
std::optional<Kernel> parse_kernel(std::string_view name);

/// Tuning knobs shared by every estimator in the ensemble chain.
struct FitConfig {
  int m = 15;                       ///< ensemble size (number of sampled transforms)
  double varsigma = 0.75;           ///< bandwidth shrink factor, in (1/2, 1)
  double tol = 1e-6;                ///< stop when the projection change drops below this
  int max_inner_iter = 50;          ///< alternations on the fixed p-dimensional kernel
  int stage_iterations = 4;         ///< alternations per kernel refresh in the refined estimator
  int max_outer_iter = 200;         ///< bandwidth stages in the refined estimator
  Kernel kernel = Kernel::biweight;
  double c0 = 6.0;                  ///< pilot bandwidth constant, h0 = c0 n^{-1/(p+4)}
  double hbar0 = 2.34;              ///< final bandwidth constant, hbar = hbar0 n^{-1/(d+4)}
  double trim_quantile = 0.05;
  double ridge = 1e-10;
  std::uint64_t seed = 0;
  bool standardize_predictors = true;
  bool standardize_response = true; ///< only consulted by the characteristic family
};

/// Returns one message per violated invariant; empty means the config is usable.
std::vector<std::string> validate_config(const FitConfig& cfg);

}  // namespace esdr
