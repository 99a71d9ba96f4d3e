#pragma once

// Internal exact-greedy tree construction shared by the CART trainer and
// the boosting rounds. Level-wise: one pass over each feature's presorted
// order evaluates every active node's candidate thresholds.

#include <cstdint>
#include <span>
#include <vector>

#include "glassbox/frame.hpp"
#include "glassbox/tree.hpp"

namespace glassbox::detail {

enum class SplitCriterion { gini, mse, gbm_logistic };

struct Presort {
  // Per feature: row indices ordered by (feature value, row index).
  std::vector<std::vector<std::uint32_t>> order;
};

Presort presort(const Matrix& x);

struct BuilderConfig {
  SplitCriterion criterion = SplitCriterion::gini;
  int max_depth = 4;
  int min_samples_leaf = 1;
  double lambda = 1.0;             // gbm leaf shrinkage
  std::vector<int> monotone;       // per feature, -1/0/+1; empty = none (gbm only)
};

// For gini/mse, t1 = targets and t2 is ignored. For gbm_logistic, t1 =
// per-row gradients and t2 = per-row hessians; leaf value = -G/(H+lambda),
// bounded by the monotone-constraint interval propagated with the midpoint
// rule.
std::vector<TreeNode> build_tree(const Matrix& x, const Presort& ps,
                                 std::span<const double> t1,
                                 std::span<const double> t2,
                                 const BuilderConfig& cfg);

}  // namespace glassbox::detail
