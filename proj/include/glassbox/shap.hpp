#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "glassbox/frame.hpp"
#include "glassbox/gbm.hpp"
#include "glassbox/tree.hpp"

namespace glassbox {

enum class OutputSpace { probability, margin };

// Requested attribution space. Tree models are explained in their native
// output (leaf values, reported as probability space); GBM ensembles are
// explained in log-odds margin space, where additivity across trees is
// exact. Requesting the other space is an error, `automatic` picks the
// native one.
enum class AttributionSpace { automatic, probability, margin };

// Per-feature Shapley contributions for one prediction.
// base_value + sum(phi) = output within 1e-8 (local accuracy).
struct Attribution {
  std::vector<std::string> features;
  std::vector<double> phi;
  double base_value = 0.0;
  double output = 0.0;
  OutputSpace space = OutputSpace::probability;

  double phi_sum() const;
};

// Polynomial-time path-dependent tree Shapley values, conditional
// expectations weighted by per-node training covers.
Attribution tree_shap_local(const TreeModel& model, std::span<const double> row,
                            AttributionSpace space = AttributionSpace::automatic);
Attribution tree_shap_local(const GbmModel& model, std::span<const double> row,
                            AttributionSpace space = AttributionSpace::automatic);

// Exponential-cost exact Shapley value via subset enumeration of the
// cover-weighted conditional expectation game; testing oracle for
// tree_shap_local. Requires <= 15 features.
Attribution shapley_brute_oracle(const TreeModel& model, std::span<const double> row);
Attribution shapley_brute_oracle(const GbmModel& model, std::span<const double> row);

// Cover-weighted expected output of a single tree (the Shapley base value).
double expected_tree_value(const TreeModel& model);

// Mean |phi| per feature over rows, descending (ties by feature order).
std::vector<std::pair<std::string, double>> global_importance(const TreeModel& model,
                                                              const Frame& rows);
std::vector<std::pair<std::string, double>> global_importance(const GbmModel& model,
                                                              const Frame& rows);

}  // namespace glassbox
