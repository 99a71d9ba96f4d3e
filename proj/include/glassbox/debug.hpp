#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "glassbox/frame.hpp"
#include "glassbox/model_io.hpp"
#include "glassbox/shap.hpp"

namespace glassbox {

// Signed binomial deviance residuals: sign(y - p) * sqrt(-2 [y ln p +
// (1-y) ln(1-p)]) with p clamped away from 0 and 1. Positive residuals are
// under-predicted events, negative ones over-predicted non-events.
std::vector<double> deviance_residuals(std::span<const double> predictions,
                                       std::span<const double> labels);

struct GroupSummary {
  double group_value = 0.0;
  std::string group_label;
  std::size_t count = 0;
  double mean_residual = 0.0;
  double mean_abs_residual = 0.0;
  double min_residual = 0.0;
  double max_residual = 0.0;
};

struct ResidualReport {
  std::string group_feature;  // empty when ungrouped
  std::vector<double> predictions;
  std::vector<double> labels;
  std::vector<double> residuals;
  std::vector<double> group_values;     // per-row value of group_feature
  std::vector<GroupSummary> groups;     // ascending by group value
};

// Scores `rows` with the model, computes deviance residuals against the
// frame's target, and summarizes them per distinct value of group_feature
// (pass an empty name to skip grouping).
ResidualReport residuals_by_group(const AnyModel& model, const Frame& rows,
                                  const std::string& group_feature);

struct WhatIfResult {
  std::vector<std::string> features;
  std::vector<double> original_row;
  std::vector<double> edited_row;
  double original_output = 0.0;
  double edited_output = 0.0;
  double delta = 0.0;
  std::optional<Attribution> original_attribution;
  std::optional<Attribution> edited_attribution;
};

// Re-scores one row with selected feature values replaced. When `explain`
// is set and the model is tree-based, both versions of the row are also
// attributed.
WhatIfResult what_if(const AnyModel& model, const Frame& rows, std::size_t row,
                     const std::map<std::string, double>& edits, bool explain);

}  // namespace glassbox
