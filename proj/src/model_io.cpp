#include "glassbox/model_io.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "glassbox/errors.hpp"

namespace glassbox {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json nodes_to_json(const std::vector<TreeNode>& nodes) {
  json arr = json::array();
  for (const TreeNode& nd : nodes) {
    arr.push_back({{"feature", nd.feature},
                   {"threshold", nd.threshold},
                   {"left", nd.left},
                   {"right", nd.right},
                   {"value", nd.value},
                   {"cover", nd.cover}});
  }
  return arr;
}

std::vector<TreeNode> nodes_from_json(const json& arr) {
  std::vector<TreeNode> nodes;
  for (const json& j : arr) {
    TreeNode nd;
    nd.feature = j.at("feature").get<int>();
    nd.threshold = j.at("threshold").get<double>();
    nd.left = j.at("left").get<int>();
    nd.right = j.at("right").get<int>();
    nd.value = j.at("value").get<double>();
    nd.cover = j.at("cover").get<double>();
    nodes.push_back(nd);
  }
  if (nodes.empty()) throw ModelError("model file has a tree without nodes");
  for (const TreeNode& nd : nodes) {
    const int n = static_cast<int>(nodes.size());
    if (!nd.is_leaf() && (nd.left < 0 || nd.left >= n || nd.right < 0 || nd.right >= n)) {
      throw ModelError("model file has a node with out-of-range children");
    }
  }
  return nodes;
}

std::string task_name(const AnyModel& model) {
  if (std::holds_alternative<GbmModel>(model)) return "binary-logistic";
  if (std::holds_alternative<LinearModel>(model)) return "linear";
  return std::get<TreeModel>(model).task == TreeTask::regression ? "regression"
                                                                 : "classification-probability";
}

}  // namespace

std::string model_to_json(const AnyModel& model) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["task"] = task_name(model);
  doc["features"] = model_features(model);

  if (const auto* gbm = std::get_if<GbmModel>(&model)) {
    doc["base_score"] = gbm->base_score;
    doc["learning_rate"] = gbm->learning_rate;
    json mono = json::object();
    for (const auto& [name, dir] : gbm->monotone) mono[name] = dir;
    doc["monotone"] = mono;
    json trees = json::array();
    for (const TreeModel& t : gbm->trees) trees.push_back({{"nodes", nodes_to_json(t.nodes)}});
    doc["trees"] = trees;
    doc["max_depth"] = gbm->trees.empty() ? 0 : gbm->trees.front().max_depth;
  } else if (const auto* tree = std::get_if<TreeModel>(&model)) {
    doc["base_score"] = 0.0;
    doc["learning_rate"] = 1.0;
    doc["monotone"] = json::object();
    doc["trees"] = json::array({{{"nodes", nodes_to_json(tree->nodes)}}});
    doc["max_depth"] = tree->max_depth;
  } else {
    const auto& lin = std::get<LinearModel>(model);
    doc["coefficients"] = lin.coefficients;
    doc["intercept"] = lin.intercept;
    doc["r_squared"] = lin.r_squared;
    doc["n_fit"] = lin.n_fit;
  }

  return doc.dump(2) + "\n";
}

void save_model(const AnyModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file '" + path + "'");
  out << model_to_json(model);
  if (!out) throw DataError("write failure on '" + path + "'");
}

AnyModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ModelError("malformed model file '" + path + "': " + e.what());
  }

  try {
    const int version = doc.at("format_version").get<int>();
    if (version != kFormatVersion) {
      throw ModelError("model file '" + path + "' has format_version " +
                       std::to_string(version) + ", expected " + std::to_string(kFormatVersion));
    }
    const std::string task = doc.at("task").get<std::string>();
    const auto features = doc.at("features").get<std::vector<std::string>>();

    if (task == "linear") {
      LinearModel lin;
      lin.feature_names = features;
      lin.coefficients = doc.at("coefficients").get<std::vector<double>>();
      lin.intercept = doc.at("intercept").get<double>();
      lin.r_squared = doc.at("r_squared").get<double>();
      lin.n_fit = doc.at("n_fit").get<std::size_t>();
      if (lin.coefficients.size() != lin.feature_names.size()) {
        throw ModelError("model file '" + path + "': coefficient/feature count mismatch");
      }
      return lin;
    }

    const int max_depth = doc.value("max_depth", 0);
    if (task == "binary-logistic") {
      GbmModel gbm;
      gbm.feature_names = features;
      gbm.base_score = doc.at("base_score").get<double>();
      gbm.learning_rate = doc.at("learning_rate").get<double>();
      for (const auto& [name, dir] : doc.at("monotone").items()) {
        gbm.monotone[name] = dir.get<int>();
      }
      for (const json& jt : doc.at("trees")) {
        TreeModel t;
        t.nodes = nodes_from_json(jt.at("nodes"));
        t.feature_names = features;
        t.max_depth = max_depth;
        t.task = TreeTask::regression;
        gbm.trees.push_back(std::move(t));
      }
      return gbm;
    }
    if (task == "classification-probability" || task == "regression") {
      const json& trees = doc.at("trees");
      if (trees.size() != 1) {
        throw ModelError("model file '" + path + "': single-tree task with " +
                         std::to_string(trees.size()) + " trees");
      }
      TreeModel t;
      t.nodes = nodes_from_json(trees.at(0).at("nodes"));
      t.feature_names = features;
      t.max_depth = max_depth;
      t.task = task == "regression" ? TreeTask::regression : TreeTask::classification_probability;
      return t;
    }
    throw ModelError("model file '" + path + "': unknown task '" + task + "'");
  } catch (const json::exception& e) {
    throw ModelError("malformed model file '" + path + "': " + e.what());
  }
}

const std::vector<std::string>& model_features(const AnyModel& model) {
  return std::visit([](const auto& m) -> const std::vector<std::string>& { return m.feature_names; },
                    model);
}

double score_row(const AnyModel& model, std::span<const double> x) {
  return std::visit([&](const auto& m) { return m.predict_row(x); }, model);
}

std::vector<double> predict_proba(const AnyModel& model, const Frame& rows) {
  if (const auto* tree = std::get_if<TreeModel>(&model)) return predict(*tree, rows);
  if (const auto* gbm = std::get_if<GbmModel>(&model)) return predict(*gbm, rows);
  return predict_linear_clamped(std::get<LinearModel>(model), rows);
}

double predict_proba(const AnyModel& model, std::span<const double> x) {
  if (const auto* lin = std::get_if<LinearModel>(&model)) {
    return std::clamp(lin->predict_row(x), 0.0, 1.0);
  }
  return score_row(model, x);
}

std::string model_kind(const AnyModel& model) {
  if (std::holds_alternative<GbmModel>(model)) return "gbm";
  if (std::holds_alternative<LinearModel>(model)) return "linear";
  return "tree";
}

}  // namespace glassbox
