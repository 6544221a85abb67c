#pragma once

#include "esdr/linalg.hpp"

namespace esdr {

/// Predictors X (n x p) and responses Y (n x s). Immutable once built.
class Dataset {
 public:
  /// Validates shape and finiteness; requires n >= p + 2.
  Dataset(Matrix x, Matrix y);

  const Matrix& x() const { return x_; }
  const Matrix& y() const { return y_; }
  Index n() const { return x_.rows(); }
  Index p() const { return x_.cols(); }
  Index s() const { return y_.cols(); }

 private:
  Matrix x_;
  Matrix y_;
};

struct StandardizeRecord {
  Vector mean;
  Vector sd;
  bool applied = false;

  /// Identity record for p columns (used when standardization is disabled).
  static StandardizeRecord identity(Index p);

  Matrix apply(const Matrix& x) const;
  Matrix invert(const Matrix& z) const;

  /// Maps a basis estimated on standardized predictors back to the original
  /// predictor scale: rows rescaled by 1/sd, then re-orthonormalized.
  Matrix basis_to_original(const Matrix& basis) const;
};

struct Standardized {
  Matrix z;
  StandardizeRecord record;
};

/// Centers each column and scales it to unit sample sd (n - 1 divisor).
/// Throws Error("degenerate predictor column ...") on a constant column.
Standardized standardize_predictors(const Matrix& x);

}  // namespace esdr
