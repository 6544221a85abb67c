#include "esdr/dataset.hpp"

#include <cmath>
#include <string>

#include "esdr/error.hpp"
#include "esdr/subspace.hpp"

namespace esdr {

Dataset::Dataset(Matrix x, Matrix y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.rows() != y_.rows())
    throw Error("predictor and response row counts differ (" + std::to_string(x_.rows()) + " vs " +
                std::to_string(y_.rows()) + ")");
  if (x_.cols() < 1 || y_.cols() < 1) throw Error("dataset needs at least one predictor and one response");
  if (x_.rows() < x_.cols() + 2)
    throw Error("need n >= p + 2 observations (n=" + std::to_string(x_.rows()) +
                ", p=" + std::to_string(x_.cols()) + ")");
  if (!x_.allFinite() || !y_.allFinite()) throw Error("dataset contains non-finite entries");
}

StandardizeRecord StandardizeRecord::identity(Index p) {
  return {Vector::Zero(p), Vector::Ones(p), false};
}

Matrix StandardizeRecord::apply(const Matrix& x) const {
  if (!applied) return x;
  return (x.rowwise() - mean.transpose()).array().rowwise() / sd.transpose().array();
}

Matrix StandardizeRecord::invert(const Matrix& z) const {
  if (!applied) return z;
  return (z.array().rowwise() * sd.transpose().array()).matrix().rowwise() + mean.transpose();
}

Matrix StandardizeRecord::basis_to_original(const Matrix& basis) const {
  if (!applied) return basis;
  Matrix scaled = basis.array().colwise() / sd.array();
  return orthonormalize(scaled).matrix();
}

Standardized standardize_predictors(const Matrix& x) {
  const Index n = x.rows();
  if (n < 2) throw Error("standardization needs at least two rows");
  StandardizeRecord rec;
  rec.applied = true;
  rec.mean = x.colwise().mean().transpose();
  rec.sd.resize(x.cols());
  for (Index c = 0; c < x.cols(); ++c) {
    const double ss = (x.col(c).array() - rec.mean(c)).square().sum();
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (!(sd > 0.0) || sd <= 1e-14 * std::max(1.0, std::abs(rec.mean(c))))
      throw Error("degenerate predictor column " + std::to_string(c));
    rec.sd(c) = sd;
  }
  Matrix z = rec.apply(x);
  return {std::move(z), std::move(rec)};
}

}  // namespace esdr
