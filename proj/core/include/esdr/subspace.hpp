#pragma once

#include "esdr/linalg.hpp"

namespace esdr {

/// A p x d semiorthogonal matrix (B^T B = I_d) standing for span(B).
///
/// Sign convention: the largest-magnitude entry of each column is positive
/// (first such entry on exact ties), so equal spans produced by the same
/// pipeline print identically.
class Basis {
 public:
  const Matrix& matrix() const { return b_; }
  Index p() const { return b_.rows(); }
  Index d() const { return b_.cols(); }

  /// p x p orthogonal projection onto the span.
  Matrix projection() const;

 private:
  friend Basis orthonormalize(const Matrix& m);
  friend Basis basis_from_orthonormal_columns(Matrix q);
  explicit Basis(Matrix b) : b_(std::move(b)) {}
  Matrix b_;
};

/// Symmetric (polar) orthonormalization M (M^T M)^{-1/2} followed by the
/// sign convention. Input that is already semiorthogonal to 1e-13 is only
/// sign-normalized, which makes the map idempotent bit for bit.
/// Throws Error("rank-deficient basis candidate") if M lacks full column rank.
Basis orthonormalize(const Matrix& m);

/// Wraps columns that are orthonormal by construction (e.g. eigenvectors),
/// keeping their order and applying only the sign convention.
Basis basis_from_orthonormal_columns(Matrix q);

enum class NormKind { operator_norm, frobenius };

/// ||P1 - P2|| in the operator (spectral) or Frobenius norm.
double distance(const Basis& a, const Basis& b, NormKind norm = NormKind::operator_norm);

/// Principal angles in [0, pi/2], ascending; min(d1, d2) entries.
Vector principal_angles(const Basis& a, const Basis& b);

}  // namespace esdr
