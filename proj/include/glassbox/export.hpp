#pragma once

#include <string>
#include <utility>
#include <vector>

#include "glassbox/debug.hpp"
#include "glassbox/fairness.hpp"
#include "glassbox/lime.hpp"
#include "glassbox/pdp.hpp"
#include "glassbox/shap.hpp"
#include "glassbox/surrogate.hpp"

namespace glassbox {

// All emitters return complete file contents with '\n' line endings and
// shortest-round-trip numbers, so equal inputs yield byte-equal files.

// One attribution: a comment line with base/output/space, then feature rows.
std::string attribution_csv(const Attribution& attribution,
                            std::span<const double> row_values);

std::string importance_csv(const std::vector<std::pair<std::string, double>>& ranking);

// Grid rows with pdp, divergence, and the first `max_ice` ICE curves as
// extra columns.
std::string curves_csv(const CurveSet& curves, std::size_t max_ice = 20);

std::string residuals_csv(const ResidualReport& report);
std::string residual_groups_csv(const ResidualReport& report);

std::string lime_csv(const LimeResult& result);

std::string fairness_json(const DisparityReport& report, const GroupSpec& spec);
std::string remediation_json(const RemediationResult& result, const GroupSpec& spec);

// Line chart of the PDP curve over the first `max_ice` ICE curves.
std::string curves_svg(const CurveSet& curves, std::size_t max_ice = 20);

// Residual scatter against the group value (row index when ungrouped).
std::string residuals_svg(const ResidualReport& report);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace glassbox
