#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "glassbox/fairness.hpp"
#include "glassbox/frame.hpp"
#include "glassbox/tree.hpp"

namespace glassbox {

// Configuration of the end-to-end reporting pipeline: train a tuned decision
// tree and a boosted ensemble, explain the ensemble globally and locally,
// summarize residuals, optionally audit group fairness, and write every
// artifact plus a combined report.md into out_dir. Given the same frame and
// config the run is bit-reproducible.
struct ReportConfig {
  std::string data_label;  // shown in the report header
  std::string out_dir;
  std::uint64_t seed = 42;
  double valid_fraction = 0.25;

  // Boosted-model hyperparameters.
  int n_rounds = 100;
  double learning_rate = 0.1;
  int max_depth = 4;
  double l2 = 1.0;
  std::map<std::string, int> monotone;

  // Features hidden from both models (still available for auditing).
  std::vector<std::string> exclude;

  // Explanation settings; empty pdp_features means the top two by
  // global importance.
  std::vector<std::string> pdp_features;
  int grid_size = 20;
  double interaction_factor = 2.0;
  int surrogate_depth = 4;
  std::string segment;         // optional predicate for a segment explanation
  int lime_top_k = 7;
  std::string residual_group;  // optional grouping feature for residuals

  std::optional<GroupSpec> fairness;
  double remediation_step = 0.05;
};

struct ReportResult {
  std::vector<std::string> files;  // paths written, report.md last
};

ReportResult run_report(const Frame& data, const ReportConfig& cfg);

// ASCII rendering of a tree's split structure, used by the report and the
// surrogate CLI output.
std::string render_tree(const TreeModel& model);

}  // namespace glassbox
