#include "esdr/simgen.hpp"

#include <cmath>
#include <string>

#include "esdr/error.hpp"
#include "esdr/random.hpp"

namespace esdr {
namespace {

Vector unit(Index p, Index i) {
  Vector e = Vector::Zero(p);
  e(i) = 1.0;
  return e;
}

Vector ones_on(Index p, Index first, Index count) {
  Vector v = Vector::Zero(p);
  v.segment(first, count).setOnes();
  return v;
}

Index noise_columns(Model model) {
  switch (model) {
    case Model::modelG: return 2;
    case Model::ex8: return 5;
    default: return 1;
  }
}

Matrix ar1_covariance(Index p, double rho) {
  Matrix sigma(p, p);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < p; ++j) sigma(i, j) = std::pow(rho, static_cast<double>(std::abs(i - j)));
  return sigma;
}

Matrix ex8_error_covariance() {
  Matrix sigma = Matrix::Zero(5, 5);
  sigma(0, 0) = 1.0;
  sigma(0, 1) = sigma(1, 0) = -0.5;
  sigma(1, 1) = 0.5;
  sigma(2, 2) = 0.5;
  sigma(3, 3) = 1.0 / 3.0;
  sigma(4, 4) = 0.25;
  return sigma;
}

double sign(double v) { return static_cast<double>((v > 0.0) - (v < 0.0)); }

}  // namespace

const std::vector<ModelInfo>& list_models() {
  static const std::vector<ModelInfo> catalog{
      {Model::ex1, "ex1", 2, 400, 10, 1, 15, 2, true, "Y = cos(2 X1) - cos(X2) + 0.2 e"},
      {Model::ex2, "ex2", 3, 400, 10, 1, 15, 3, true, "Y = X1 / (0.5 + (X2 + 1.5)^2) + X3 e"},
      {Model::ex3, "ex3", 2, 400, 10, 1, 15, 8, false,
       "Y = 1[b1'X + 0.2 e > 1] + 2 1[b2'X + 0.2 e > 0], b1 = e1+..+e4, b2 = e(p-3)+..+ep"},
      {Model::modelA, "modelA", 1, 400, 10, 1, 15, 4, true, "Y = (X'b)^-1 + 0.2 e, b = e1+..+e4"},
      {Model::modelB, "modelB", 2, 400, 10, 1, 15, 2, true, "Y = cos(2 X1) - cos(X2) + 0.2 e"},
      {Model::modelC, "modelC", 3, 400, 10, 1, 15, 3, true, "Y = X1 / (0.5 + (X2 + 1.5)^2) + X3^2 e"},
      {Model::modelD, "modelD", 1, 400, 10, 1, 15, 4, true, "Y = (X'b)^-1 + 0.2 e, b = e1+..+e4"},
      {Model::modelE, "modelE", 1, 400, 10, 1, 15, 4, true, "Y = 0.1 (X'b + e)^3, b = e1+..+e4"},
      {Model::modelF, "modelF", 1, 400, 10, 1, 15, 3, true, "Y = exp(X'b) e, b = e1 + 0.5 e2 + e3"},
      {Model::modelG, "modelG", 2, 400, 10, 1, 15, 2, true, "Y = sign(2 X1 + e1) log|2 X2 + 4 + e2|"},
      {Model::ex6, "ex6", 1, 400, 10, 1, 15, 1, true, "Y = arcsin(1 / (1 + |0.5 + X1|)) + 0.2 e"},
      {Model::ex8, "ex8", 2, 100, 6, 5, 15000, 6, false, "5 responses in X1, X2 with block-diagonal error covariance"},
  };
  return catalog;
}

const ModelInfo& model_info(Model model) { return list_models()[static_cast<std::size_t>(model)]; }

std::optional<Model> parse_model(std::string_view name) {
  for (const auto& info : list_models())
    if (info.name == name) return info.model;
  // Short aliases "A".."G" for the order-determination and comparison models.
  if (name.size() == 1 && name[0] >= 'A' && name[0] <= 'G')
    return static_cast<Model>(static_cast<int>(Model::modelA) + (name[0] - 'A'));
  return std::nullopt;
}

Matrix true_directions(Model model, Index p) {
  const auto& info = model_info(model);
  if (p < info.min_p)
    throw Error("model " + std::string(info.name) + " needs p >= " + std::to_string(info.min_p) + " (got " +
                std::to_string(p) + ")");
  if (model == Model::ex8 && p != 6) throw Error("model ex8 is defined for p = 6");
  switch (model) {
    case Model::ex1:
    case Model::modelB:
    case Model::modelG:
    case Model::ex8: {
      Matrix b(p, 2);
      b << unit(p, 0), unit(p, 1);
      return b;
    }
    case Model::ex2:
    case Model::modelC: {
      Matrix b(p, 3);
      b << unit(p, 0), unit(p, 1), unit(p, 2);
      return b;
    }
    case Model::ex3: {
      Matrix b(p, 2);
      b << ones_on(p, 0, 4), ones_on(p, p - 4, 4);
      return b;
    }
    case Model::modelA:
    case Model::modelD:
    case Model::modelE: return ones_on(p, 0, 4);
    case Model::modelF: {
      Vector b = Vector::Zero(p);
      b(0) = 1.0;
      b(1) = 0.5;
      b(2) = 1.0;
      return b;
    }
    case Model::ex6: return unit(p, 0);
  }
  throw Error("unknown model");
}

Matrix response_from_predictors(Model model, const Matrix& x, const Matrix& noise) {
  const Index n = x.rows();
  const Matrix u = x * true_directions(model, x.cols());
  if (noise.rows() != n || noise.cols() != noise_columns(model)) throw Error("noise matrix has the wrong shape");
  Matrix y(n, model_info(model).s);
  for (Index i = 0; i < n; ++i) {
    const double e = noise(i, 0);
    switch (model) {
      case Model::ex1:
      case Model::modelB: y(i, 0) = std::cos(2.0 * u(i, 0)) - std::cos(u(i, 1)) + 0.2 * e; break;
      case Model::ex2: y(i, 0) = u(i, 0) / (0.5 + std::pow(u(i, 1) + 1.5, 2)) + u(i, 2) * e; break;
      case Model::modelC:
        y(i, 0) = u(i, 0) / (0.5 + std::pow(u(i, 1) + 1.5, 2)) + u(i, 2) * u(i, 2) * e;
        break;
      case Model::ex3:
        y(i, 0) = (u(i, 0) + 0.2 * e > 1.0 ? 1.0 : 0.0) + 2.0 * (u(i, 1) + 0.2 * e > 0.0 ? 1.0 : 0.0);
        break;
      case Model::modelA:
      case Model::modelD: y(i, 0) = 1.0 / u(i, 0) + 0.2 * e; break;
      case Model::modelE: y(i, 0) = 0.1 * std::pow(u(i, 0) + e, 3); break;
      case Model::modelF: y(i, 0) = std::exp(u(i, 0)) * e; break;
      case Model::modelG:
        y(i, 0) = sign(2.0 * u(i, 0) + e) * std::log(std::abs(2.0 * u(i, 1) + 4.0 + noise(i, 1)));
        break;
      case Model::ex6: y(i, 0) = std::asin(1.0 / (1.0 + std::abs(0.5 + u(i, 0)))) + 0.2 * e; break;
      case Model::ex8: {
        const double x1 = u(i, 0);
        const double x2 = u(i, 1);
        y(i, 0) = x2 + 3.0 * x2 / (0.5 + std::pow(x1 + 1.5, 2)) + noise(i, 0);
        y(i, 1) = x1 + std::exp(0.5 * x2) + noise(i, 1);
        y(i, 2) = x1 + x2 + noise(i, 2);
        y(i, 3) = noise(i, 3);
        y(i, 4) = noise(i, 4);
        break;
      }
    }
  }
  return y;
}

Simulated generate(const ModelSpec& spec) {
  const auto& info = model_info(spec.model);
  const Matrix directions = true_directions(spec.model, spec.p);
  if (spec.n < spec.p + 2) throw Error("need n >= p + 2");
  Engine engine = derive_engine(spec.seed, {stream_tag("simgen"), static_cast<std::uint64_t>(spec.model)});

  Matrix x = standard_normal(spec.n, spec.p, engine);
  if (info.correlated) {
    const Eigen::LLT<Matrix> chol(ar1_covariance(spec.p, 0.5));
    x = x * chol.matrixU();  // rows ~ N(0, L L^T)
  }
  Matrix noise = standard_normal(spec.n, noise_columns(spec.model), engine);
  if (spec.model == Model::ex8) {
    const Eigen::LLT<Matrix> chol(ex8_error_covariance());
    noise = noise * Matrix(chol.matrixU());
  }
  Matrix y = response_from_predictors(spec.model, x, noise);
  return {Dataset(std::move(x), std::move(y)), orthonormalize(directions), std::move(noise)};
}

}  // namespace esdr
