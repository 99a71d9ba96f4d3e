#include "glassbox/debug.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "glassbox/errors.hpp"
#include "glassbox/format.hpp"

namespace glassbox {

namespace {
constexpr double kProbFloor = 1e-15;
}

std::vector<double> deviance_residuals(std::span<const double> predictions,
                                       std::span<const double> labels) {
  if (predictions.size() != labels.size()) {
    throw InvalidArgument("predictions and labels differ in length");
  }
  std::vector<double> out(predictions.size());
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double y = labels[i];
    if (y != 0.0 && y != 1.0) {
      throw InvalidArgument("labels must be 0 or 1");
    }
    const double p = std::clamp(predictions[i], kProbFloor, 1.0 - kProbFloor);
    const double deviance = -2.0 * (y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
    const double magnitude = std::sqrt(std::max(deviance, 0.0));
    const double diff = y - p;
    out[i] = diff > 0.0 ? magnitude : (diff < 0.0 ? -magnitude : 0.0);
  }
  return out;
}

ResidualReport residuals_by_group(const AnyModel& model, const Frame& rows,
                                  const std::string& group_feature) {
  if (rows.n_rows() == 0) throw InvalidArgument("residual report needs at least one row");
  const std::optional<std::size_t> target = rows.target_index();
  if (!target.has_value()) throw DataError("residual report needs a target column");

  const Matrix x = align_matrix(rows, model_features(model));

  ResidualReport report;
  report.group_feature = group_feature;
  report.labels = rows.target_values();
  report.predictions.resize(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) {
    report.predictions[r] = predict_proba(model, x.row(r));
  }
  report.residuals = deviance_residuals(report.predictions, report.labels);

  if (group_feature.empty()) return report;

  if (!rows.has_column(group_feature)) {
    throw InvalidArgument("group feature '" + group_feature + "' is not in the data");
  }
  report.group_values = rows.ordinal_column(group_feature);

  std::vector<double> distinct = report.group_values;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  for (const double value : distinct) {
    GroupSummary summary;
    summary.group_value = value;
    summary.min_residual = std::numeric_limits<double>::infinity();
    summary.max_residual = -std::numeric_limits<double>::infinity();
    double total = 0.0;
    double total_abs = 0.0;
    for (std::size_t r = 0; r < report.group_values.size(); ++r) {
      if (report.group_values[r] != value) continue;
      ++summary.count;
      total += report.residuals[r];
      total_abs += std::abs(report.residuals[r]);
      summary.min_residual = std::min(summary.min_residual, report.residuals[r]);
      summary.max_residual = std::max(summary.max_residual, report.residuals[r]);
    }
    summary.mean_residual = total / static_cast<double>(summary.count);
    summary.mean_abs_residual = total_abs / static_cast<double>(summary.count);
    summary.group_label = format_double(value);
    report.groups.push_back(std::move(summary));
  }
  return report;
}

WhatIfResult what_if(const AnyModel& model, const Frame& rows, std::size_t row,
                     const std::map<std::string, double>& edits, bool explain) {
  if (row >= rows.n_rows()) throw InvalidArgument("row index out of range");
  if (edits.empty()) throw InvalidArgument("no edits given");

  const std::vector<std::string> names = model_features(model);
  for (const auto& [feature, value] : edits) {
    (void)value;
    if (std::find(names.begin(), names.end(), feature) == names.end()) {
      throw InvalidArgument("edited feature '" + feature + "' is not a model input");
    }
  }

  const Matrix x = align_matrix(rows, names);

  WhatIfResult result;
  result.features = names;
  const auto src = x.row(row);
  result.original_row.assign(src.begin(), src.end());
  result.edited_row = result.original_row;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto it = edits.find(names[i]);
    if (it != edits.end()) result.edited_row[i] = it->second;
  }

  result.original_output = predict_proba(model, result.original_row);
  result.edited_output = predict_proba(model, result.edited_row);
  result.delta = result.edited_output - result.original_output;

  if (explain) {
    if (std::holds_alternative<LinearModel>(model)) {
      throw InvalidArgument("attribution is only available for tree-based models");
    }
    const auto attribute = [&](std::span<const double> values) {
      if (const auto* tree = std::get_if<TreeModel>(&model)) {
        return tree_shap_local(*tree, values);
      }
      return tree_shap_local(std::get<GbmModel>(model), values);
    };
    result.original_attribution = attribute(result.original_row);
    result.edited_attribution = attribute(result.edited_row);
  }
  return result;
}

}  // namespace glassbox
