#pragma once

#include <string_view>
#include <variant>
#include <vector>

#include "esdr/linalg.hpp"
#include "esdr/random.hpp"

namespace esdr {

enum class FamilyKind { characteristic, boxcox, haar, slice, polynomial, kernel_density };

std::string_view to_string(FamilyKind kind);

/// exp(i t^T y) for sampled frequencies t (rows of `frequencies`, m x s).
/// With `standardize_response` each response coordinate is robust-standardized first.
struct CharacteristicParams {
  Matrix frequencies;
  bool standardize_response = true;
};
/// (y^t - 1)/t, log y at t = 0. Requires y > 0.
struct BoxCoxParams {
  std::vector<double> exponents;
};
/// {1} and psi(2^l u - k), l = 1..max_level, applied to rank-transformed y.
struct HaarParams {
  int max_level = 1;
};
/// 1{y < t}.
struct SliceParams {
  std::vector<double> thresholds;
};
/// y^t.
struct PolynomialParams {
  std::vector<int> degrees;
};
/// b^{-1} phi((y - a)/b) with phi the standard normal density.
struct KernelDensityParams {
  std::vector<double> centers;
  std::vector<double> widths;
};

using FamilyParams = std::variant<CharacteristicParams, BoxCoxParams, HaarParams, SliceParams,
                                  PolynomialParams, KernelDensityParams>;

/// A finite set of response transformations drawn from a characterizing family.
class FunctionFamily {
 public:
  explicit FunctionFamily(FamilyParams params);

  FamilyKind kind() const;
  const FamilyParams& params() const { return params_; }
  /// Number of member functions m.
  Index size() const;
  bool complex_valued() const { return kind() == FamilyKind::characteristic; }
  /// Number of response columns the family expects (s for characteristic, 1 otherwise).
  Index arity() const;

 private:
  FamilyParams params_;
};

struct PanelColumn {
  int member;  ///< k, zero-based
  int part;    ///< 1 = real part, 2 = imaginary part
};

/// Transformed responses f_{T_k}(Y_i, l), one column per (k, l).
struct ResponsePanel {
  Matrix values;
  std::vector<PanelColumn> columns;

  Index n() const { return values.rows(); }
  Index width() const { return values.cols(); }
};

/// T_1..T_m i.i.d. N(0, I_s), drawn row by row from `engine`.
FunctionFamily sample_cf_family(Index s, int m, Engine& engine, bool standardize_response = true);

inline const std::vector<double>& default_boxcox_grid() {
  static const std::vector<double> grid{-2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0};
  return grid;
}
FunctionFamily boxcox_family(std::vector<double> grid = default_boxcox_grid());
FunctionFamily haar_family(int max_level);
FunctionFamily slice_family(std::vector<double> thresholds);
/// Thresholds at the empirical quantiles k/(m+1), k = 1..m, of a single response column.
FunctionFamily slice_family_from_quantiles(const Matrix& y, int m);
FunctionFamily poly_family(std::vector<int> degrees);
FunctionFamily kde_family(std::vector<double> centers, std::vector<double> widths);
/// Centers at response quantiles k/(m+1); common width from the normal reference rule.
FunctionFamily kde_family_from_quantiles(const Matrix& y, int m);

/// Y_i - min(Y) + 0.5, column by column.
Matrix shift_nonneg(const Matrix& y);

/// Centers at the median and divides by the normal-consistent MAD (falling
/// back to the sd, then to 1, when the MAD is zero).
Vector robust_standardize(const Vector& y);

/// Box-Cox transform for a single exponent; stable near t = 0.
double boxcox(double y, double t);
/// Haar mother wavelet: 1 on [0,1/2), -1 on [1/2,1), 0 elsewhere.
double haar_psi(double u);

/// Evaluates every member on every row of y.
/// Throws Error for arity mismatch or nonpositive responses under Box-Cox.
ResponsePanel evaluate(const FunctionFamily& family, const Matrix& y);

}  // namespace esdr
