#pragma once

#include <string>
#include <variant>
#include <vector>

#include "glassbox/frame.hpp"
#include "glassbox/gbm.hpp"
#include "glassbox/linear.hpp"
#include "glassbox/tree.hpp"

namespace glassbox {

using AnyModel = std::variant<TreeModel, GbmModel, LinearModel>;

// JSON document: {format_version, task, base_score, learning_rate, monotone,
// features, trees:[{nodes:[{feature, threshold, left, right, value, cover}]}]}
// for tree-based models; linear models persist coefficients under the same
// envelope. Numbers are written as shortest round-trippable decimals, so
// load(save(m)) scores bit-identically.
void save_model(const AnyModel& model, const std::string& path);
AnyModel load_model(const std::string& path);
std::string model_to_json(const AnyModel& model);

const std::vector<std::string>& model_features(const AnyModel& model);

// Native per-row output: leaf value for trees, probability for GBMs,
// raw linear response for linear models.
double score_row(const AnyModel& model, std::span<const double> x);

// Probability view used by the CLI: tree leaf values and GBM sigmoid
// outputs as-is, linear outputs clamped to [0,1] for reporting.
std::vector<double> predict_proba(const AnyModel& model, const Frame& rows);
double predict_proba(const AnyModel& model, std::span<const double> x);

std::string model_kind(const AnyModel& model);  // "tree" | "gbm" | "linear"

}  // namespace glassbox
