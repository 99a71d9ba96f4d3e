#pragma once

#include <span>
#include <string>
#include <vector>

#include "glassbox/frame.hpp"

namespace glassbox {

// One node of a decision tree. feature < 0 marks a leaf. Internal nodes
// route value < threshold to the left child. cover is the number of
// training rows that reached the node; the Shapley computations use it as
// the conditional-expectation weight, so it is persisted with the model.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
  double cover = 0.0;

  bool is_leaf() const { return feature < 0; }
};

enum class TreeTask { classification_probability, regression };

struct TreeModel {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  std::vector<std::string> feature_names;
  int max_depth = 0;
  TreeTask task = TreeTask::classification_probability;

  double predict_row(std::span<const double> x) const;
  // Depth of the deepest leaf actually present.
  int depth() const;
};

struct TreeParams {
  int max_depth = 4;
  int min_samples_leaf = 1;
};

// Greedy CART on Gini impurity; leaf value = positive-class fraction.
// Deterministic: candidate thresholds are midpoints between consecutive
// distinct sorted values, ties broken by lowest feature index then lowest
// threshold.
TreeModel train_tree(const Frame& train, const TreeParams& params);

// Variance-reduction regression tree on an explicit design matrix; used by
// surrogate extraction.
TreeModel train_regression_tree(const Matrix& x, std::span<const double> y,
                                const TreeParams& params);

std::vector<double> predict(const TreeModel& model, const Frame& rows);

}  // namespace glassbox
