#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "glassbox/errors.hpp"
#include "glassbox/model_io.hpp"
#include "glassbox/random.hpp"
#include "helpers.hpp"

using namespace glassbox;
using gbtest::frame_from;

namespace {

std::filesystem::path temp_model(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << body;
  return path;
}

Frame noisy_frame(unsigned seed, std::size_t n) {
  Rng rng(seed);
  std::vector<double> x0(n), x1(n), y(n);
  for (std::size_t r = 0; r < n; ++r) {
    x0[r] = rng.normal();
    x1[r] = rng.normal();
    y[r] = rng.uniform() < sigmoid(1.3 * x0[r] - 0.7 * x1[r]) ? 1.0 : 0.0;
  }
  return frame_from({x0, x1}, y);
}

}  // namespace

TEST_CASE("models survive a save/load round trip bit-for-bit") {
  const Frame f = noisy_frame(501, 150);
  const auto path = std::filesystem::temp_directory_path() / "gb_roundtrip.json";

  SUBCASE("classification tree") {
    TreeParams params;
    params.max_depth = 4;
    const AnyModel original = train_tree(f, params);
    save_model(original, path.string());
    const AnyModel loaded = load_model(path.string());
    CHECK(model_kind(loaded) == "tree");
    CHECK(model_to_json(loaded) == model_to_json(original));
    CHECK(predict_proba(loaded, f) == predict_proba(original, f));
  }
  SUBCASE("boosted ensemble") {
    GbmParams params;
    params.n_rounds = 12;
    params.monotone = {{"x0", 1}};
    const AnyModel original = train_gbm(f, params);
    save_model(original, path.string());
    const AnyModel loaded = load_model(path.string());
    CHECK(model_kind(loaded) == "gbm");
    CHECK(model_to_json(loaded) == model_to_json(original));
    CHECK(predict_proba(loaded, f) == predict_proba(original, f));
    CHECK(std::get<GbmModel>(loaded).monotone == std::map<std::string, int>{{"x0", 1}});
  }
  SUBCASE("linear model") {
    const Matrix x = design_matrix(f);
    const std::vector<double> w(f.n_rows(), 1.0);
    const AnyModel original = fit_linear_weighted(x, f.target_values(), w, {});
    save_model(original, path.string());
    const AnyModel loaded = load_model(path.string());
    CHECK(model_kind(loaded) == "linear");
    CHECK(model_to_json(loaded) == model_to_json(original));
    const auto& lin = std::get<LinearModel>(loaded);
    const auto& orig = std::get<LinearModel>(original);
    CHECK(lin.coefficients == orig.coefficients);
    CHECK(lin.intercept == orig.intercept);
    CHECK(lin.r_squared == orig.r_squared);
    CHECK(lin.n_fit == orig.n_fit);
  }
  std::filesystem::remove(path);
}

TEST_CASE("model feature lists and scoring views stay consistent") {
  const Frame f = noisy_frame(502, 100);
  GbmParams params;
  params.n_rounds = 5;
  const AnyModel gbm = train_gbm(f, params);
  CHECK(model_features(gbm) == std::vector<std::string>{"x0", "x1"});

  const Matrix x = design_matrix(f);
  const std::vector<double> probs = predict_proba(gbm, f);
  for (std::size_t r = 0; r < 5; ++r) {
    CHECK(probs[r] == score_row(gbm, x.row(r)));
    CHECK(probs[r] == predict_proba(gbm, x.row(r)));
  }

  const std::vector<double> w(f.n_rows(), 1.0);
  const AnyModel lin = fit_linear_weighted(x, f.target_values(), w, {});
  const std::vector<double> clamped = predict_linear_clamped(std::get<LinearModel>(lin), f);
  CHECK(predict_proba(lin, f) == clamped);
}

TEST_CASE("loading rejects broken model files") {
  SUBCASE("missing file") {
    CHECK_THROWS_WITH_AS(load_model("/nonexistent/gb_model.json"),
                         doctest::Contains("cannot open model file"), ModelError);
  }
  SUBCASE("unparseable json") {
    const auto path = temp_model("gb_bad1.json", "{not json");
    CHECK_THROWS_WITH_AS(load_model(path.string()), doctest::Contains("malformed model file"),
                         ModelError);
    std::filesystem::remove(path);
  }
  SUBCASE("wrong format version") {
    const auto path = temp_model(
        "gb_bad2.json",
        R"({"format_version": 99, "task": "regression", "features": [], "trees": []})");
    CHECK_THROWS_WITH_AS(load_model(path.string()), doctest::Contains("format_version 99"),
                         ModelError);
    std::filesystem::remove(path);
  }
  SUBCASE("unknown task") {
    const auto path = temp_model(
        "gb_bad3.json",
        R"({"format_version": 1, "task": "quantile", "features": [], "trees": []})");
    CHECK_THROWS_WITH_AS(load_model(path.string()), doctest::Contains("unknown task 'quantile'"),
                         ModelError);
    std::filesystem::remove(path);
  }
  SUBCASE("tree with out-of-range children") {
    const auto path = temp_model(
        "gb_bad4.json",
        R"({"format_version": 1, "task": "regression", "features": ["x0"], "max_depth": 2,
            "trees": [{"nodes": [
              {"feature": 0, "threshold": 0.5, "left": 1, "right": 7, "value": 0, "cover": 2},
              {"feature": -1, "threshold": 0, "left": -1, "right": -1, "value": 1, "cover": 1}
            ]}]})");
    CHECK_THROWS_WITH_AS(load_model(path.string()), doctest::Contains("out-of-range children"),
                         ModelError);
    std::filesystem::remove(path);
  }
  SUBCASE("empty tree") {
    const auto path = temp_model(
        "gb_bad5.json",
        R"({"format_version": 1, "task": "regression", "features": [], "max_depth": 1,
            "trees": [{"nodes": []}]})");
    CHECK_THROWS_WITH_AS(load_model(path.string()), doctest::Contains("without nodes"),
                         ModelError);
    std::filesystem::remove(path);
  }
  SUBCASE("single-tree task with several trees") {
    const auto path = temp_model(
        "gb_bad6.json",
        R"({"format_version": 1, "task": "regression", "features": ["x0"], "max_depth": 1,
            "trees": [
              {"nodes": [{"feature": -1, "threshold": 0, "left": -1, "right": -1,
                          "value": 0.5, "cover": 1}]},
              {"nodes": [{"feature": -1, "threshold": 0, "left": -1, "right": -1,
                          "value": 0.5, "cover": 1}]}
            ]})");
    CHECK_THROWS_WITH_AS(load_model(path.string()),
                         doctest::Contains("single-tree task with 2 trees"), ModelError);
    std::filesystem::remove(path);
  }
  SUBCASE("linear coefficient count mismatch") {
    const auto path = temp_model(
        "gb_bad7.json",
        R"({"format_version": 1, "task": "linear", "features": ["a", "b"],
            "coefficients": [1.0], "intercept": 0.0, "r_squared": 0.5, "n_fit": 10})");
    CHECK_THROWS_WITH_AS(load_model(path.string()),
                         doctest::Contains("coefficient/feature count mismatch"), ModelError);
    std::filesystem::remove(path);
  }
  SUBCASE("missing required key") {
    const auto path = temp_model("gb_bad8.json", R"({"format_version": 1})");
    CHECK_THROWS_AS(load_model(path.string()), ModelError);
    std::filesystem::remove(path);
  }
  SUBCASE("unwritable output path") {
    const Frame f = noisy_frame(503, 40);
    TreeParams params;
    const AnyModel m = train_tree(f, params);
    CHECK_THROWS_AS(save_model(m, "/nonexistent/dir/out.json"), DataError);
  }
}
