#include <doctest.h>

#include <cmath>
#include <vector>

#include "glassbox/errors.hpp"
#include "glassbox/linear.hpp"
#include "glassbox/random.hpp"
#include "helpers.hpp"

using namespace glassbox;
using gbtest::frame_from;

namespace {

Matrix features_of(const Frame& f) { return design_matrix(f); }

}  // namespace

TEST_CASE("weighted least squares matches the hand-solved normal equations") {
  // x = {0,1,2}, y = {1,3,4}, w = {1,2,1}.
  // sum(w)=4, sum(wx)=4, sum(wx^2)=6, sum(wy)=11, sum(wxy)=14 gives
  // slope 12/8 = 1.5 and intercept 10/8 = 1.25; residuals are -+0.25 with
  // ss_res = 0.25 against ss_tot = 4.75, so R^2 = 18/19.
  const Frame f = frame_from({{0, 1, 2}}, {1, 1, 0});
  const Matrix x = features_of(f);
  const std::vector<double> y = {1.0, 3.0, 4.0};
  const std::vector<double> w = {1.0, 2.0, 1.0};

  const LinearModel m = fit_linear_weighted(x, y, w, {});
  REQUIRE(m.coefficients.size() == 1);
  CHECK(m.coefficients[0] == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(m.intercept == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(m.r_squared == doctest::Approx(18.0 / 19.0).epsilon(1e-12));
  CHECK(m.n_fit == 3);
  CHECK(m.feature_names == std::vector<std::string>{"x0"});

  const double probe[1] = {2.0};
  CHECK(m.predict_row(probe) == doctest::Approx(4.25).epsilon(1e-12));
}

TEST_CASE("an exact linear target is recovered to machine precision") {
  Rng rng(11);
  std::vector<double> x0(60), x1(60), y(60);
  for (std::size_t r = 0; r < 60; ++r) {
    x0[r] = rng.normal();
    x1[r] = rng.normal();
    y[r] = 3.0 * x0[r] - 2.0 * x1[r] + 0.75;
  }
  const Frame f = frame_from({x0, x1}, std::vector<double>(60, 0.0));
  const std::vector<double> w(60, 1.0);
  const LinearModel m = fit_linear_weighted(features_of(f), y, w, {});
  CHECK(m.coefficients[0] == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(m.coefficients[1] == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(m.intercept == doctest::Approx(0.75).epsilon(1e-10));
  CHECK(m.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("duplicate columns are singular without ridge and solvable with it") {
  const Frame f = frame_from({{1, 2, 3, 4}, {1, 2, 3, 4}}, {0, 0, 1, 1});
  const Matrix x = features_of(f);
  const std::vector<double> y = {1.0, 2.0, 3.0, 4.0};
  const std::vector<double> w(4, 1.0);

  CHECK_THROWS_WITH_AS(fit_linear_weighted(x, y, w, {}),
                       doctest::Contains("singular normal equations"), InvalidArgument);

  LinearOptions ridge;
  ridge.l2 = 0.1;
  const LinearModel m = fit_linear_weighted(x, y, w, ridge);
  // The two identical columns must share the load symmetrically.
  CHECK(m.coefficients[0] == doctest::Approx(m.coefficients[1]).epsilon(1e-10));
}

TEST_CASE("top-k keeps the largest standardized coefficients in index order") {
  Rng rng(23);
  std::vector<double> x0(100), x1(100), x2(100), y(100);
  for (std::size_t r = 0; r < 100; ++r) {
    x0[r] = rng.normal();
    x1[r] = rng.normal();
    x2[r] = rng.normal();
    y[r] = 0.001 * x0[r] + 5.0 * x1[r] + 2.0 * x2[r];
  }
  const Frame f = frame_from({x0, x1, x2}, std::vector<double>(100, 0.0));
  const std::vector<double> w(100, 1.0);

  LinearOptions options;
  options.top_k = 2;
  const LinearModel m = fit_linear_weighted(features_of(f), y, w, options);
  // x1 outranks x2 outranks x0, and the survivors come back in design order.
  CHECK(m.feature_names == std::vector<std::string>{"x1", "x2"});
  REQUIRE(m.coefficients.size() == 2);
  // The dropped 0.001 * x0 term leaks into the refit coefficients.
  CHECK(m.coefficients[0] == doctest::Approx(5.0).epsilon(1e-4));
  CHECK(m.coefficients[1] == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(m.r_squared > 0.99);

  LinearOptions keep_all;
  keep_all.top_k = 10;  // larger than the feature count keeps everything
  const LinearModel full = fit_linear_weighted(features_of(f), y, w, keep_all);
  CHECK(full.feature_names == std::vector<std::string>{"x0", "x1", "x2"});
}

TEST_CASE("a constant target reports zero r-squared") {
  const Frame f = frame_from({{0, 1, 2, 3}}, {0, 0, 1, 1});
  const std::vector<double> y(4, 2.5);
  const std::vector<double> w(4, 1.0);
  const LinearModel m = fit_linear_weighted(features_of(f), y, w, {});
  CHECK(m.r_squared == 0.0);
  CHECK(m.intercept == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("zero-weight rows do not influence the fit") {
  // The outlier at x=10 carries weight 0, so the slope comes from the
  // first three points alone (exactly y = x).
  const Frame f = frame_from({{0, 1, 2, 10}}, {0, 0, 1, 1});
  const std::vector<double> y = {0.0, 1.0, 2.0, -50.0};
  const std::vector<double> w = {1.0, 1.0, 1.0, 0.0};
  const LinearModel m = fit_linear_weighted(features_of(f), y, w, {});
  CHECK(m.coefficients[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(m.intercept == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("frame prediction applies coefficients and clamping") {
  const Frame f = frame_from({{0, 1, 2}}, {0, 1, 1});
  const Matrix x = features_of(f);
  const std::vector<double> y = {-0.5, 0.5, 1.5};
  const std::vector<double> w(3, 1.0);
  const LinearModel m = fit_linear_weighted(x, y, w, {});

  const std::vector<double> raw = predict_linear(m, f);
  REQUIRE(raw.size() == 3);
  CHECK(raw[0] == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(raw[2] == doctest::Approx(1.5).epsilon(1e-12));

  const std::vector<double> clamped = predict_linear_clamped(m, f);
  CHECK(clamped[0] == 0.0);
  CHECK(clamped[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(clamped[2] == 1.0);
}

TEST_CASE("weighted fitting validates its inputs") {
  const Frame f = frame_from({{0, 1, 2}}, {0, 1, 1});
  const Matrix x = features_of(f);
  const std::vector<double> y = {1.0, 2.0, 3.0};

  SUBCASE("row count mismatch") {
    const std::vector<double> w(2, 1.0);
    CHECK_THROWS_AS(fit_linear_weighted(x, y, w, {}), InvalidArgument);
    const std::vector<double> y_short = {1.0, 2.0};
    const std::vector<double> w3(3, 1.0);
    CHECK_THROWS_AS(fit_linear_weighted(x, y_short, w3, {}), InvalidArgument);
  }
  SUBCASE("negative or non-finite weights") {
    CHECK_THROWS_AS(fit_linear_weighted(x, y, std::vector<double>{1.0, -1.0, 1.0}, {}),
                    InvalidArgument);
    CHECK_THROWS_AS(
        fit_linear_weighted(x, y, std::vector<double>{1.0, std::nan(""), 1.0}, {}),
        InvalidArgument);
  }
  SUBCASE("all-zero weights") {
    CHECK_THROWS_WITH_AS(fit_linear_weighted(x, y, std::vector<double>(3, 0.0), {}),
                         doctest::Contains("at least one weight"), InvalidArgument);
  }
  SUBCASE("negative ridge") {
    LinearOptions options;
    options.l2 = -1.0;
    CHECK_THROWS_AS(fit_linear_weighted(x, y, std::vector<double>(3, 1.0), options),
                    InvalidArgument);
  }
}
