#include <doctest.h>

#include <cmath>
#include <numeric>

#include "esdr/error.hpp"
#include "esdr/families.hpp"
#include "helpers.hpp"

using namespace esdr;

namespace {

Matrix column(std::initializer_list<double> values) {
  Matrix y(static_cast<Index>(values.size()), 1);
  Index i = 0;
  for (double v : values) y(i++, 0) = v;
  return y;
}

}  // namespace

TEST_CASE("sample_cf_family draws standard normal frequencies from the seeded stream") {
  Engine e1 = derive_engine(5, {stream_tag("cf")});
  Engine e2 = derive_engine(5, {stream_tag("cf")});
  const auto a = sample_cf_family(1, 3, e1);
  const auto b = sample_cf_family(1, 3, e2);
  const auto& ta = std::get<CharacteristicParams>(a.params()).frequencies;
  CHECK(ta.rows() == 3);
  CHECK(ta.cols() == 1);
  CHECK(ta == std::get<CharacteristicParams>(b.params()).frequencies);
  CHECK(a.kind() == FamilyKind::characteristic);
  CHECK(a.complex_valued());

  Engine big = derive_engine(6, {stream_tag("cf")});
  const auto many = sample_cf_family(2, 10000, big);
  const Matrix& t = std::get<CharacteristicParams>(many.params()).frequencies;
  for (Index c = 0; c < 2; ++c) CHECK(std::abs(t.col(c).mean()) < 4.0 / 100.0);

  Engine e8 = derive_engine(7, {1});
  const auto five = sample_cf_family(5, 15, e8);
  CHECK(std::get<CharacteristicParams>(five.params()).frequencies.cols() == 5);
  CHECK(five.arity() == 5);

  Engine e0 = derive_engine(7, {2});
  CHECK_THROWS_AS(sample_cf_family(1, 0, e0), Error);
}

TEST_CASE("Box-Cox members") {
  CHECK(boxcox(3.0, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(boxcox(1.0, 0.0) == 0.0);
  CHECK(boxcox(2.0, 0.0) == doctest::Approx(std::log(2.0)));
  CHECK(std::abs(boxcox(2.0, 1e-9) - boxcox(2.0, 0.0)) < 1e-8);
  CHECK(std::abs(boxcox(2.0, -1e-7) - boxcox(2.0, 0.0)) < 1e-7);
  CHECK(boxcox(4.0, 0.5) == doctest::Approx(2.0));

  const auto fam = boxcox_family();
  CHECK(fam.size() == 9);
  const ResponsePanel panel = evaluate(fam, column({1.0, 2.0, 4.0}));
  REQUIRE(panel.width() == 9);
  // Grid position 6 is t = 1.
  CHECK(panel.values(0, 6) == doctest::Approx(0.0));
  CHECK(panel.values(1, 6) == doctest::Approx(1.0));
  CHECK(panel.values(2, 6) == doctest::Approx(3.0));

  CHECK_THROWS_WITH_AS(evaluate(fam, column({1.0, -2.0, 3.0})), doctest::Contains("shift_nonneg"), Error);
  CHECK_THROWS_AS(boxcox_family({}), Error);
}

TEST_CASE("shift_nonneg") {
  const Matrix shifted = shift_nonneg(column({-1.0, 0.0, 3.0}));
  CHECK(shifted(0, 0) == 0.5);
  CHECK(shifted(1, 0) == 1.5);
  CHECK(shifted(2, 0) == 4.5);

  const Matrix positive = column({0.5, 2.0, 7.25});
  CHECK(shift_nonneg(positive) == positive);

  const Matrix constant = shift_nonneg(column({3.3, 3.3, 3.3}));
  CHECK((constant.array() == 0.5).all());

  const Matrix random = test::random_matrix(50, 1, 3) * 10.0;
  CHECK(shift_nonneg(random).minCoeff() == 0.5);
}

TEST_CASE("Haar family") {
  CHECK(haar_psi(0.25) == 1.0);
  CHECK(haar_psi(0.75) == -1.0);
  CHECK(haar_psi(1.5) == 0.0);
  CHECK(haar_psi(-0.1) == 0.0);

  for (int level = 1; level <= 5; ++level) {
    Index expected = 1;
    for (int l = 1; l <= level; ++l) expected += Index{1} << l;
    CHECK(haar_family(level).size() == expected);
  }
  CHECK_THROWS_AS(haar_family(0), Error);

  // Evaluated on a fine grid the non-constant members are nearly orthogonal.
  auto gram_offdiag = [](Index n) {
    Matrix y(n, 1);
    for (Index i = 0; i < n; ++i) y(i, 0) = static_cast<double>(i);
    const Matrix g = evaluate(haar_family(3), y).values.rightCols(14);
    const Matrix gram = g.transpose() * g / static_cast<double>(n);
    return (gram - Matrix(gram.diagonal().asDiagonal())).cwiseAbs().maxCoeff();
  };
  CHECK(gram_offdiag(1024) <= gram_offdiag(100));
  CHECK(gram_offdiag(1024) < 1e-2);
}

TEST_CASE("slice, polynomial and kernel-density families") {
  const Matrix y = test::random_matrix(10000, 1, 9);

  SUBCASE("slice at the median has column mean near 1/2") {
    const auto fam = slice_family_from_quantiles(y, 1);
    const ResponsePanel panel = evaluate(fam, y);
    CHECK(std::abs(panel.values.col(0).mean() - 0.5) < 1e-3);
    CHECK(((panel.values.array() == 0.0) || (panel.values.array() == 1.0)).all());
    CHECK(slice_family_from_quantiles(y, 7).size() == 7);
  }

  SUBCASE("polynomial degree 1 reproduces Y") {
    const ResponsePanel panel = evaluate(poly_family({1, 2, 3}), y);
    CHECK(panel.values.col(0) == y.col(0));
    CHECK(panel.values(3, 2) == doctest::Approx(std::pow(y(3, 0), 3)));
    CHECK_THROWS_AS(poly_family({0}), Error);
  }

  SUBCASE("kernel-density members integrate to 1") {
    const auto fam = kde_family({0.3, -1.0}, {0.5, 0.2});
    const Index n = 20001;
    Matrix grid(n, 1);
    const double lo = -8.0, step = 16.0 / static_cast<double>(n - 1);
    for (Index i = 0; i < n; ++i) grid(i, 0) = lo + step * static_cast<double>(i);
    const ResponsePanel panel = evaluate(fam, grid);
    for (Index k = 0; k < 2; ++k) CHECK(std::abs(panel.values.col(k).sum() * step - 1.0) < 1e-3);
    CHECK_THROWS_AS(kde_family({0.0}, {0.0}), Error);
    CHECK_THROWS_AS(kde_family({0.0, 1.0}, {1.0}), Error);
    CHECK(kde_family_from_quantiles(y, 5).size() == 5);
  }

  SUBCASE("real families need a single response column") {
    CHECK_THROWS_AS(evaluate(poly_family({1}), test::random_matrix(5, 2, 1)), Error);
  }
}

TEST_CASE("characteristic panel") {
  SUBCASE("zero frequency gives columns (1, 0)") {
    const FunctionFamily fam(CharacteristicParams{Matrix::Zero(1, 1), true});
    const ResponsePanel panel = evaluate(fam, test::random_matrix(20, 1, 2));
    CHECK((panel.values.col(0).array() == 1.0).all());
    CHECK((panel.values.col(1).array() == 0.0).all());
  }

  SUBCASE("interleaved cos/sin with unit modulus and bounded entries") {
    Engine engine = derive_engine(3, {stream_tag("cf")});
    for (bool standardize : {true, false}) {
      const auto fam = sample_cf_family(2, 15, engine, standardize);
      const Matrix y = test::random_matrix(200, 2, 4) * 5.0;
      const ResponsePanel panel = evaluate(fam, y);
      REQUIRE(panel.width() == 30);
      for (Index k = 0; k < 15; ++k) {
        CHECK(panel.columns[static_cast<std::size_t>(2 * k)].member == k);
        CHECK(panel.columns[static_cast<std::size_t>(2 * k)].part == 1);
        CHECK(panel.columns[static_cast<std::size_t>(2 * k + 1)].part == 2);
        const auto modulus = panel.values.col(2 * k).array().square() + panel.values.col(2 * k + 1).array().square();
        CHECK((modulus - 1.0).abs().maxCoeff() < 1e-12);
      }
      CHECK(panel.values.cwiseAbs().maxCoeff() <= 1.0);
    }
  }

  SUBCASE("raw mode evaluates cos/sin of T'Y directly") {
    Matrix t(1, 2);
    t << 0.7, -1.3;
    const FunctionFamily fam(CharacteristicParams{t, false});
    const Matrix y = test::random_matrix(6, 2, 5);
    const ResponsePanel panel = evaluate(fam, y);
    for (Index i = 0; i < 6; ++i) {
      const double phase = 0.7 * y(i, 0) - 1.3 * y(i, 1);
      CHECK(panel.values(i, 0) == doctest::Approx(std::cos(phase)).epsilon(1e-15));
      CHECK(panel.values(i, 1) == doctest::Approx(std::sin(phase)).epsilon(1e-15));
    }
  }

  SUBCASE("row permutation permutes panel rows") {
    Engine engine = derive_engine(4, {stream_tag("cf")});
    const auto fam = sample_cf_family(1, 5, engine);
    const Matrix y = test::random_matrix(30, 1, 6);
    Eigen::PermutationMatrix<Eigen::Dynamic> perm(30);
    perm.setIdentity();
    std::reverse(perm.indices().data(), perm.indices().data() + 30);
    const Matrix permuted = perm * y;
    CHECK(test::max_abs(evaluate(fam, permuted).values - perm * evaluate(fam, y).values) < 1e-14);
  }

  SUBCASE("arity mismatch is an error") {
    Engine engine = derive_engine(5, {stream_tag("cf")});
    CHECK_THROWS_AS(evaluate(sample_cf_family(2, 3, engine), test::random_matrix(5, 1, 1)), Error);
  }
}

TEST_CASE("robust_standardize centers at the median with a MAD scale") {
  Vector y(5);
  y << 1.0, 2.0, 3.0, 4.0, 100.0;
  const Vector z = robust_standardize(y);
  CHECK(z(2) == 0.0);
  CHECK(z(3) == doctest::Approx(1.0 / 1.4826));
  CHECK(robust_standardize(Vector::Constant(4, 2.0)).cwiseAbs().maxCoeff() == 0.0);
}
