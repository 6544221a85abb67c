#include "esdr/families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "esdr/error.hpp"

namespace esdr {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<double> empirical_quantiles(const Matrix& y, int m) {
  if (y.cols() != 1) throw Error("quantile-based families need a single response column");
  if (m < 1) throw Error("family size must be >= 1");
  std::vector<double> sorted(y.data(), y.data() + y.rows());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(m));
  for (int k = 1; k <= m; ++k) {
    // Linear interpolation between order statistics (type 7).
    const double pos = (n - 1.0) * static_cast<double>(k) / static_cast<double>(m + 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - std::floor(pos);
    out.push_back(sorted[lo] + frac * (sorted[hi] - sorted[lo]));
  }
  return out;
}

// Mid-ranks mapped into (0, 1): (rank - 0.5) / n, ties share their average rank.
Vector rank_transform(const Vector& y) {
  const Index n = y.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return y(a) < y(b); });
  Vector u(n);
  Index start = 0;
  while (start < n) {
    Index stop = start + 1;
    while (stop < n && y(order[stop]) == y(order[start])) ++stop;
    const double mid_rank = 0.5 * static_cast<double>(start + 1 + stop);  // mean of ranks start+1..stop
    for (Index r = start; r < stop; ++r) u(order[r]) = (mid_rank - 0.5) / static_cast<double>(n);
    start = stop;
  }
  return u;
}


double median_of(std::vector<double> v) {
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  return 0.5 * (upper + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
}

}  // namespace

Vector robust_standardize(const Vector& y) {
  const Index n = y.size();
  if (n == 0) return y;
  const double center = median_of(std::vector<double>(y.data(), y.data() + n));
  std::vector<double> dev(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) dev[static_cast<std::size_t>(i)] = std::abs(y(i) - center);
  double scale = 1.4826 * median_of(dev);
  if (!(scale > 0.0) && n > 1) {
    const double mean = y.mean();
    scale = std::sqrt((y.array() - mean).square().sum() / static_cast<double>(n - 1));
  }
  Vector out = y.array() - center;
  if (scale > 0.0) out /= scale;
  return out;
}

std::string_view to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::characteristic: return "cf";
    case FamilyKind::boxcox: return "boxcox";
    case FamilyKind::haar: return "haar";
    case FamilyKind::slice: return "slice";
    case FamilyKind::polynomial: return "poly";
    case FamilyKind::kernel_density: return "kde";
  }
  return "unknown";
}

FunctionFamily::FunctionFamily(FamilyParams params) : params_(std::move(params)) {
  std::visit(Overloaded{
                 [](const CharacteristicParams& p) {
                   if (p.frequencies.rows() < 1 || p.frequencies.cols() < 1)
                     throw Error("characteristic family needs m >= 1 frequency vectors of length s >= 1");
                 },
                 [](const BoxCoxParams& p) {
                   if (p.exponents.empty()) throw Error("Box-Cox grid must be nonempty");
                 },
                 [](const HaarParams& p) {
                   if (p.max_level < 1 || p.max_level > 20) throw Error("Haar max level must be in [1, 20]");
                 },
                 [](const SliceParams& p) {
                   if (p.thresholds.empty()) throw Error("slice thresholds must be nonempty");
                 },
                 [](const PolynomialParams& p) {
                   if (p.degrees.empty()) throw Error("polynomial degrees must be nonempty");
                   for (int d : p.degrees)
                     if (d < 1) throw Error("polynomial degrees must be >= 1");
                 },
                 [](const KernelDensityParams& p) {
                   if (p.centers.empty() || p.centers.size() != p.widths.size())
                     throw Error("kernel-density family needs matching nonempty center and width lists");
                   for (double b : p.widths)
                     if (!(b > 0.0)) throw Error("kernel-density widths must be positive");
                 },
             },
             params_);
}

FamilyKind FunctionFamily::kind() const { return static_cast<FamilyKind>(params_.index()); }

Index FunctionFamily::size() const {
  return std::visit(Overloaded{
                        [](const CharacteristicParams& p) { return p.frequencies.rows(); },
                        [](const BoxCoxParams& p) { return static_cast<Index>(p.exponents.size()); },
                        [](const HaarParams& p) { return (Index{1} << (p.max_level + 1)) - 1; },
                        [](const SliceParams& p) { return static_cast<Index>(p.thresholds.size()); },
                        [](const PolynomialParams& p) { return static_cast<Index>(p.degrees.size()); },
                        [](const KernelDensityParams& p) { return static_cast<Index>(p.centers.size()); },
                    },
                    params_);
}

Index FunctionFamily::arity() const {
  if (const auto* cf = std::get_if<CharacteristicParams>(&params_)) return cf->frequencies.cols();
  return 1;
}

FunctionFamily sample_cf_family(Index s, int m, Engine& engine, bool standardize_response) {
  if (s < 1) throw Error("response dimension must be >= 1");
  if (m < 1) throw Error("ensemble size must be ≥ 1");
  return FunctionFamily(CharacteristicParams{standard_normal(m, s, engine), standardize_response});
}

FunctionFamily boxcox_family(std::vector<double> grid) { return FunctionFamily(BoxCoxParams{std::move(grid)}); }

FunctionFamily haar_family(int max_level) { return FunctionFamily(HaarParams{max_level}); }

FunctionFamily slice_family(std::vector<double> thresholds) {
  return FunctionFamily(SliceParams{std::move(thresholds)});
}

FunctionFamily slice_family_from_quantiles(const Matrix& y, int m) {
  return slice_family(empirical_quantiles(y, m));
}

FunctionFamily poly_family(std::vector<int> degrees) { return FunctionFamily(PolynomialParams{std::move(degrees)}); }

FunctionFamily kde_family(std::vector<double> centers, std::vector<double> widths) {
  return FunctionFamily(KernelDensityParams{std::move(centers), std::move(widths)});
}

FunctionFamily kde_family_from_quantiles(const Matrix& y, int m) {
  auto centers = empirical_quantiles(y, m);
  const double n = static_cast<double>(y.rows());
  const double mean = y.col(0).mean();
  const double sd = std::sqrt((y.col(0).array() - mean).square().sum() / std::max(1.0, n - 1.0));
  const double width = std::max(1.06 * sd * std::pow(n, -0.2), 1e-8);
  std::vector<double> widths(centers.size(), width);
  return kde_family(std::move(centers), std::move(widths));
}

Matrix shift_nonneg(const Matrix& y) {
  Matrix out = y;
  for (Index c = 0; c < y.cols(); ++c) {
    const double lo = y.col(c).minCoeff();
    out.col(c).array() = (y.col(c).array() - lo) + 0.5;
  }
  return out;
}

double boxcox(double y, double t) {
  const double log_y = std::log(y);
  if (t == 0.0) return log_y;
  // expm1 keeps (y^t - 1)/t accurate as t -> 0.
  return std::expm1(t * log_y) / t;
}

double haar_psi(double u) {
  if (u >= 0.0 && u < 0.5) return 1.0;
  if (u >= 0.5 && u < 1.0) return -1.0;
  return 0.0;
}

ResponsePanel evaluate(const FunctionFamily& family, const Matrix& y) {
  if (y.cols() != family.arity())
    throw Error("response has " + std::to_string(y.cols()) + " columns but the " +
                std::string(to_string(family.kind())) + " family expects " + std::to_string(family.arity()));
  if (!y.allFinite()) throw Error("responses contain non-finite entries");
  const Index n = y.rows();
  const Index m = family.size();
  ResponsePanel panel;

  auto real_panel = [&](auto&& member_value) {
    panel.values.resize(n, m);
    panel.columns.clear();
    for (Index k = 0; k < m; ++k) {
      panel.columns.push_back({static_cast<int>(k), 1});
      for (Index i = 0; i < n; ++i) panel.values(i, k) = member_value(k, i);
    }
  };

  std::visit(
      Overloaded{
          [&](const CharacteristicParams& p) {
            Matrix scaled = y;
            if (p.standardize_response) {
              for (Index c = 0; c < y.cols(); ++c) scaled.col(c) = robust_standardize(y.col(c));
            }
            const Matrix phase = scaled * p.frequencies.transpose();  // n x m
            panel.values.resize(n, 2 * m);
            panel.columns.clear();
            for (Index k = 0; k < m; ++k) {
              panel.columns.push_back({static_cast<int>(k), 1});
              panel.columns.push_back({static_cast<int>(k), 2});
              for (Index i = 0; i < n; ++i) {
                panel.values(i, 2 * k) = std::cos(phase(i, k));
                panel.values(i, 2 * k + 1) = std::sin(phase(i, k));
              }
            }
          },
          [&](const BoxCoxParams& p) {
            if (y.minCoeff() <= 0.0)
              throw Error("Box-Cox family needs positive responses; apply shift_nonneg first");
            real_panel([&](Index k, Index i) { return boxcox(y(i, 0), p.exponents[static_cast<std::size_t>(k)]); });
          },
          [&](const HaarParams& p) {
            const Vector u = rank_transform(y.col(0));
            // Member 0 is the constant; then levels l = 1..N with shifts k = 0..2^l - 1.
            std::vector<std::pair<int, int>> members{{0, 0}};
            for (int level = 1; level <= p.max_level; ++level)
              for (int shift = 0; shift < (1 << level); ++shift) members.emplace_back(level, shift);
            real_panel([&](Index k, Index i) {
              const auto [level, shift] = members[static_cast<std::size_t>(k)];
              if (level == 0) return 1.0;
              return haar_psi(std::ldexp(u(i), level) - shift);
            });
          },
          [&](const SliceParams& p) {
            real_panel([&](Index k, Index i) { return y(i, 0) < p.thresholds[static_cast<std::size_t>(k)] ? 1.0 : 0.0; });
          },
          [&](const PolynomialParams& p) {
            real_panel([&](Index k, Index i) {
              const int deg = p.degrees[static_cast<std::size_t>(k)];
              return deg == 1 ? y(i, 0) : std::pow(y(i, 0), deg);
            });
          },
          [&](const KernelDensityParams& p) {
            const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
            real_panel([&](Index k, Index i) {
              const double b = p.widths[static_cast<std::size_t>(k)];
              const double z = (y(i, 0) - p.centers[static_cast<std::size_t>(k)]) / b;
              return inv_sqrt_2pi * std::exp(-0.5 * z * z) / b;
            });
          },
      },
      family.params());

  if (!panel.values.allFinite()) throw Error("response panel contains non-finite values");
  return panel;
}

}  // namespace esdr
