#pragma once

#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "glassbox/frame.hpp"
#include "glassbox/tree.hpp"

namespace glassbox {

// Logistic sigmoid with the margin clamped so outputs stay strictly
// inside (0,1) in double precision.
inline double sigmoid(double margin) {
  const double m = std::clamp(margin, -36.0, 36.0);
  return 1.0 / (1.0 + std::exp(-m));
}

struct GbmParams {
  int n_rounds = 100;
  double learning_rate = 0.1;
  int max_depth = 4;
  int min_samples_leaf = 1;
  double l2 = 1.0;
  std::map<std::string, int> monotone;  // feature -> +1 / -1 (0 allowed, ignored)
};

// Boosted ensemble on logistic loss. Tree leaves live in log-odds margin
// space; predicted probability = sigmoid(base_score + learning_rate * sum
// of tree outputs).
struct GbmModel {
  std::vector<TreeModel> trees;
  double learning_rate = 0.1;
  double base_score = 0.0;
  std::map<std::string, int> monotone;
  std::vector<std::string> feature_names;

  double margin_row(std::span<const double> x) const;
  double predict_row(std::span<const double> x) const { return sigmoid(margin_row(x)); }
};

GbmModel train_gbm(const Frame& train, const GbmParams& params);

std::vector<double> predict_margin(const GbmModel& model, const Frame& rows);
std::vector<double> predict(const GbmModel& model, const Frame& rows);  // probabilities

}  // namespace glassbox
