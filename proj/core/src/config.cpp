#include "esdr/config.hpp"

#include <cmath>

namespace esdr {

std::string_view to_string(Kernel kernel) {
  switch (kernel) {
    case Kernel::biweight: return "biweight";
    case Kernel::gaussian: return "gaussian";
  }
  return "unknown";
}

std::optional<Kernel> parse_kernel(std::string_view name) {
  if (name == "biweight") return Kernel::biweight;
  if (name == "gaussian") return Kernel::gaussian;
  return std::nullopt;
}

std::vector<std::string> validate_config(const FitConfig& cfg) {
  std::vector<std::string> errors;
  if (cfg.m < 1) errors.emplace_back("ensemble size must be ≥ 1");
  if (!(cfg.varsigma > 0.5 && cfg.varsigma < 1.0)) errors.emplace_back("varsigma out of (1/2,1)");
  if (!(cfg.tol > 0.0)) errors.emplace_back("tol must be positive");
  if (cfg.max_inner_iter < 1) errors.emplace_back("max_inner_iter must be ≥ 1");
  if (cfg.stage_iterations < 1) errors.emplace_back("stage_iterations must be ≥ 1");
  if (cfg.max_outer_iter < 1) errors.emplace_back("max_outer_iter must be ≥ 1");
  if (!(cfg.c0 > 0.0) || !std::isfinite(cfg.c0)) errors.emplace_back("c0 must be positive");
  if (!(cfg.hbar0 > 0.0) || !std::isfinite(cfg.hbar0)) errors.emplace_back("hbar0 must be positive");
  if (!(cfg.trim_quantile >= 0.0 && cfg.trim_quantile < 0.5))
    errors.emplace_back("trim_quantile out of [0,0.5)");
  if (!(cfg.ridge >= 0.0) || !std::isfinite(cfg.ridge)) errors.emplace_back("ridge must be nonnegative");
  return errors;
}

}  // namespace esdr
