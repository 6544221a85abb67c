#include "esdr/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "esdr/error.hpp"

namespace esdr {
namespace {

void apply_sign_convention(Matrix& b) {
  for (Index c = 0; c < b.cols(); ++c) {
    Index arg = 0;
    double best = -1.0;
    for (Index r = 0; r < b.rows(); ++r) {
      const double v = std::abs(b(r, c));
      if (v > best) {
        best = v;
        arg = r;
      }
    }
    if (b(arg, c) < 0.0) b.col(c) = -b.col(c);
  }
}

bool is_semiorthogonal(const Matrix& m, double tol) {
  const Matrix gram = m.transpose() * m;
  return (gram - Matrix::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

Matrix polar_step(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m.transpose() * m);
  const Vector& lambda = eig.eigenvalues();
  if (lambda(0) <= 1e-24 * std::max(1.0, lambda(lambda.size() - 1)) ||
      lambda(0) <= 1e-13 * lambda(lambda.size() - 1))
    throw Error("rank-deficient basis candidate");
  const Matrix inv_sqrt =
      eig.eigenvectors() * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
  return m * inv_sqrt;
}

}  // namespace

Matrix Basis::projection() const {
  Matrix p = b_ * b_.transpose();
  return 0.5 * (p + p.transpose());
}

Basis orthonormalize(const Matrix& m) {
  if (m.cols() < 1 || m.cols() > m.rows())
    throw Error("basis candidate must be p x d with 1 <= d <= p (got " + std::to_string(m.rows()) + "x" +
                std::to_string(m.cols()) + ")");
  if (!m.allFinite()) throw Error("rank-deficient basis candidate");
  Matrix b = m;
  if (!is_semiorthogonal(b, 1e-13)) {
    b = polar_step(b);
    // A second pass cleans up the rounding left by ill-conditioned inputs.
    if (!is_semiorthogonal(b, 1e-14)) b = polar_step(b);
  }
  apply_sign_convention(b);
  return Basis(std::move(b));
}

Basis basis_from_orthonormal_columns(Matrix q) {
  if (q.cols() < 1 || q.cols() > q.rows()) throw Error("basis must be p x d with 1 <= d <= p");
  if (!is_semiorthogonal(q, 1e-10)) return orthonormalize(q);
  apply_sign_convention(q);
  return Basis(std::move(q));
}

double distance(const Basis& a, const Basis& b, NormKind norm) {
  if (a.p() != b.p())
    throw Error("basis row dimensions differ (" + std::to_string(a.p()) + " vs " + std::to_string(b.p()) + ")");
  const Matrix diff = a.projection() - b.projection();
  if (norm == NormKind::frobenius) return diff.norm();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(diff, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

Vector principal_angles(const Basis& a, const Basis& b) {
  if (a.p() != b.p()) throw Error("basis row dimensions differ");
  Eigen::JacobiSVD<Matrix> svd(a.matrix().transpose() * b.matrix());
  Vector cosines = svd.singularValues();
  Vector angles(cosines.size());
  for (Index i = 0; i < cosines.size(); ++i) angles(i) = std::acos(std::clamp(cosines(i), 0.0, 1.0));
  std::sort(angles.data(), angles.data() + angles.size());
  return angles;
}

}  // namespace esdr
