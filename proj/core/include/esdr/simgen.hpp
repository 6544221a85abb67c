#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "esdr/dataset.hpp"
#include "esdr/subspace.hpp"

namespace esdr {

enum class Model { ex1, ex2, ex3, modelA, modelB, modelC, modelD, modelE, modelF, modelG, ex6, ex8 };

struct ModelInfo {
  Model model;
  std::string_view name;
  Index d0;
  Index default_n;
  Index default_p;
  Index s;          ///< response dimension
  int default_m;    ///< ensemble size used for this model in the simulation study
  Index min_p;
  bool correlated;  ///< X ~ N(0, 0.5^|i-j|) rather than N(0, I)
  std::string_view formula;
};

const std::vector<ModelInfo>& list_models();
const ModelInfo& model_info(Model model);
std::optional<Model> parse_model(std::string_view name);

struct ModelSpec {
  Model model = Model::ex1;
  Index n = 400;
  Index p = 10;
  std::uint64_t seed = 0;
};

struct Simulated {
  Dataset data;
  Basis b0;      ///< orthonormalized true directions
  Matrix noise;  ///< the error draws used for Y (n x noise columns)
};

/// Unnormalized true directions (columns) for a model at predictor dimension p.
Matrix true_directions(Model model, Index p);

/// Y as a function of the predictors and the error draws. Depends on x only
/// through x * true_directions(model, p).
Matrix response_from_predictors(Model model, const Matrix& x, const Matrix& noise);

/// Draws X, then the errors, from a stream derived from spec.seed.
/// Throws Error if p is too small for the model's coefficient pattern.
Simulated generate(const ModelSpec& spec);

}  // namespace esdr
