#include "esdr/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "esdr/error.hpp"

namespace esdr {
namespace {

double quantile_of(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - std::floor(pos)) * (values[hi] - values[lo]);
}

WeightPlan weights_from_coordinates(const Matrix& u, double h, Kernel kernel, double trim_quantile) {
  if (!(h > 0.0) || !std::isfinite(h)) throw Error("bandwidth must be positive");
  const Index n = u.rows();
  WeightPlan plan;
  plan.h = h;
  plan.dim = u.cols();
  plan.w.resize(n, n);
  plan.density.resize(n);
  plan.isolated.assign(static_cast<std::size_t>(n), 0);

  // Kernel values are symmetric, so fill the upper triangle and mirror.
  const double self = scaled_kernel(kernel, 0.0, h, plan.dim);
  for (Index j = 0; j < n; ++j) {
    plan.w(j, j) = self;
    for (Index i = j + 1; i < n; ++i) {
      const double k = scaled_kernel(kernel, (u.row(i) - u.row(j)).squaredNorm(), h, plan.dim);
      plan.w(i, j) = k;
      plan.w(j, i) = k;
    }
  }
  for (Index j = 0; j < n; ++j) {
    auto col = plan.w.col(j);
    const double total = col.sum();
    plan.density(j) = total / static_cast<double>(n);
    const double off_diagonal = total - col(j);
    if (!(total > 0.0) || !(off_diagonal > 0.0) || !std::isfinite(total)) {
      col.setZero();
      col(j) = 1.0;
      plan.isolated[static_cast<std::size_t>(j)] = 1;
    } else {
      col /= total;
    }
  }
  plan.rho = trimming(plan.density, trim_quantile);
  for (Index j = 0; j < n; ++j)
    if (plan.isolated[static_cast<std::size_t>(j)]) plan.rho(j) = 0.0;
  return plan;
}

}  // namespace

double kernel_profile(Kernel kernel, double u) {
  switch (kernel) {
    case Kernel::biweight: {
      const double a = std::abs(u);
      if (a > 1.0) return 0.0;
      const double t = 1.0 - a * a;
      return 15.0 / 16.0 * t * t;
    }
    case Kernel::gaussian:
      return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
  }
  return 0.0;
}

double scaled_kernel(Kernel kernel, double squared_norm, double h, Index dim) {
  const double scale = std::pow(h, -static_cast<double>(dim));
  const double z2 = squared_norm / (h * h);
  switch (kernel) {
    case Kernel::biweight: {
      if (z2 > 1.0) return 0.0;
      const double t = 1.0 - z2;
      return scale * 15.0 / 16.0 * t * t;
    }
    case Kernel::gaussian:
      return scale * std::exp(-0.5 * z2) / std::sqrt(2.0 * std::numbers::pi);
  }
  return 0.0;
}

Index WeightPlan::isolated_count() const {
  return static_cast<Index>(std::count(isolated.begin(), isolated.end(), char{1}));
}

WeightPlan full_weights(const Matrix& x, double h, Kernel kernel, double trim_quantile) {
  return weights_from_coordinates(x, h, kernel, trim_quantile);
}

WeightPlan refined_weights(const Matrix& x, const Basis& basis, double h, Kernel kernel, double trim_quantile) {
  if (basis.p() != x.cols()) throw Error("basis row count does not match the number of predictors");
  return weights_from_coordinates(x * basis.matrix(), h, kernel, trim_quantile);
}

Vector trimming(const Vector& density, double quantile) {
  const Index n = density.size();
  if (n == 0 || quantile <= 0.0) return Vector::Ones(n);
  const double v0 = quantile_of(std::vector<double>(density.data(), density.data() + n), quantile);
  Vector rho(n);
  for (Index j = 0; j < n; ++j) {
    const double v = density(j);
    if (v <= v0) {
      rho(j) = 0.0;
    } else if (v0 <= 0.0 || v >= 2.0 * v0) {
      rho(j) = 1.0;
    } else {
      const double x = (v - v0) / v0;
      rho(j) = x * x * (3.0 - 2.0 * x);
    }
  }
  if (rho.maxCoeff() <= 0.0) rho.setOnes();
  return rho;
}

double bandwidth_initial(Index n, Index p, double c0) {
  return c0 * std::pow(static_cast<double>(n), -1.0 / static_cast<double>(p + 4));
}

double bandwidth_final(Index n, Index d, double hbar0) {
  return hbar0 * std::pow(static_cast<double>(n), -1.0 / static_cast<double>(d + 4));
}

std::vector<double> bandwidth_schedule(double h0, double hbar, double varsigma) {
  if (!(varsigma > 0.0 && varsigma < 1.0)) throw Error("varsigma out of (1/2,1)");
  if (!(hbar > 0.0)) throw Error("final bandwidth must be positive");
  std::vector<double> out;
  double h = h0;
  do {
    h = std::max(varsigma * h, hbar);
    out.push_back(h);
  } while (h > hbar);
  return out;
}

}  // namespace esdr
