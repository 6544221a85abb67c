#pragma once

#include <cstdint>

#include "esdr/families.hpp"
#include "esdr/linalg.hpp"
#include "esdr/random.hpp"

namespace esdr::test {

inline Matrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
  Engine engine = derive_engine(seed, {stream_tag("test-matrix")});
  return standard_normal(rows, cols, engine);
}

/// Random orthogonal matrix from the QR factor of a Gaussian matrix.
inline Matrix random_orthogonal(Index p, std::uint64_t seed) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(p, p, seed));
  return qr.householderQ() * Matrix::Identity(p, p);
}

inline ResponsePanel real_panel(const Matrix& g) {
  ResponsePanel panel;
  panel.values = g;
  for (Index k = 0; k < g.cols(); ++k) panel.columns.push_back({static_cast<int>(k), 1});
  return panel;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace esdr::test
