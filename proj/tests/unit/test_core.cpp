#include <doctest.h>

#include <cmath>
#include <set>

#include "esdr/config.hpp"
#include "esdr/dataset.hpp"
#include "esdr/error.hpp"
#include "esdr/random.hpp"
#include "esdr/subspace.hpp"
#include "helpers.hpp"

using namespace esdr;

namespace {

bool contains(const std::vector<std::string>& errors, std::string_view needle) {
  for (const auto& e : errors)
    if (e.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("validate_config reports every violated invariant") {
  CHECK(validate_config(FitConfig{}).empty());

  FitConfig cfg;
  cfg.varsigma = 0.4;
  CHECK(contains(validate_config(cfg), "varsigma out of (1/2,1)"));

  cfg = FitConfig{};
  cfg.m = 0;
  CHECK(contains(validate_config(cfg), "ensemble size must be ≥ 1"));

  cfg = FitConfig{};
  cfg.varsigma = 1.0;
  cfg.m = 0;
  cfg.tol = 0.0;
  cfg.trim_quantile = 0.5;
  CHECK(validate_config(cfg).size() >= 4);
}

TEST_CASE("Dataset enforces its invariants") {
  const Matrix x = test::random_matrix(10, 3, 1);
  const Matrix y = test::random_matrix(10, 1, 2);
  const Dataset data(x, y);
  CHECK(data.n() == 10);
  CHECK(data.p() == 3);
  CHECK(data.s() == 1);

  CHECK_THROWS_AS(Dataset(x, test::random_matrix(9, 1, 3)), Error);
  CHECK_THROWS_AS(Dataset(test::random_matrix(4, 3, 1), test::random_matrix(4, 1, 2)), Error);
  Matrix bad = x;
  bad(2, 1) = std::nan("");
  CHECK_THROWS_AS(Dataset(bad, y), Error);
}

TEST_CASE("standardize_predictors produces unit-scale columns") {
  SUBCASE("column sds (2, 0.5) become (1, 1)") {
    Matrix x = test::random_matrix(200, 2, 4);
    x.col(0) = (x.col(0).array() - x.col(0).mean()) * 2.0 + 3.0;
    x.col(1) = x.col(1).array() * 0.5 - 1.0;
    const auto [z, rec] = standardize_predictors(x);
    for (Index c = 0; c < 2; ++c) {
      const double mean = z.col(c).mean();
      const double sd = std::sqrt((z.col(c).array() - mean).square().sum() / 199.0);
      CHECK(std::abs(mean) < 1e-12);
      CHECK(std::abs(sd - 1.0) < 1e-12);
    }
    CHECK(rec.applied);
  }

  SUBCASE("already standardized input is returned unchanged") {
    const Matrix z0 = standardize_predictors(test::random_matrix(50, 3, 5)).z;
    const auto again = standardize_predictors(z0);
    CHECK(test::max_abs(again.z - z0) < 1e-12);
    CHECK((again.record.mean.cwiseAbs().array() < 1e-12).all());
    CHECK(((again.record.sd.array() - 1.0).abs() < 1e-12).all());
  }

  SUBCASE("round trip reproduces X to 1e-12 relative error") {
    Matrix x = test::random_matrix(80, 4, 6);
    x.col(2) *= 1000.0;
    x.col(3).array() += 50.0;
    const auto [z, rec] = standardize_predictors(x);
    const Matrix back = rec.invert(z);
    CHECK(test::max_abs(back - x) / test::max_abs(x) < 1e-12);
    CHECK(test::max_abs(rec.apply(x) - z) < 1e-12);
  }

  SUBCASE("constant column is rejected") {
    Matrix x = test::random_matrix(20, 3, 7);
    x.col(1).setConstant(4.0);
    CHECK_THROWS_WITH_AS(standardize_predictors(x), doctest::Contains("degenerate predictor column"), Error);
  }
}

TEST_CASE("back-mapped basis spans the direction found on the original scale") {
  // Noiseless linear model: the single direction is the regression vector in either scale.
  Matrix x = test::random_matrix(200, 3, 8);
  x.col(0) *= 3.0;
  x.col(2) *= 0.2;
  Vector beta(3);
  beta << 1.0, -2.0, 0.5;
  const auto [z, rec] = standardize_predictors(x);
  const Vector y = x * beta;
  const Vector centered = y.array() - y.mean();
  const Vector beta_z = z.householderQr().solve(centered);
  const Basis mapped = orthonormalize(rec.basis_to_original(beta_z));
  CHECK(distance(mapped, orthonormalize(beta)) < 1e-8);
}

TEST_CASE("derived seeds are deterministic and separate streams") {
  CHECK(derive_seed(7, {1, 2}) == derive_seed(7, {1, 2}));
  std::set<std::uint64_t> seen;
  for (std::uint64_t r = 0; r < 100; ++r) seen.insert(derive_seed(7, {r}));
  CHECK(seen.size() == 100);
  CHECK(derive_seed(7, {1, 2}) != derive_seed(7, {2, 1}));
  CHECK(derive_seed(7, {1}) != derive_seed(8, {1}));
  static_assert(stream_tag("a") != stream_tag("b"));

  Engine e1 = derive_engine(3, {stream_tag("x")});
  Engine e2 = derive_engine(3, {stream_tag("x")});
  const Matrix a = standard_normal(5, 4, e1);
  const Matrix b = standard_normal(5, 4, e2);
  CHECK(a == b);
}
