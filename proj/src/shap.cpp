#include "glassbox/shap.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "glassbox/errors.hpp"

namespace glassbox {

namespace {

void check_covers(const std::vector<TreeNode>& nodes) {
  for (const TreeNode& node : nodes) {
    if (!(node.cover > 0.0)) {
      throw ModelError("tree node is missing a positive cover; attribution needs training covers");
    }
  }
}

double expected_value(const std::vector<TreeNode>& nodes, int index) {
  const TreeNode& node = nodes[index];
  if (node.is_leaf()) return node.value;
  const double left = expected_value(nodes, node.left);
  const double right = expected_value(nodes, node.right);
  return (nodes[node.left].cover * left + nodes[node.right].cover * right) / node.cover;
}

// Path-dependent tree Shapley. The path records, for every feature split on
// between the root and the current node, the fraction of training rows that
// follow the path when the feature is unknown (zero_fraction) and when it is
// known (one_fraction), plus the permutation weight mass (pweight) for each
// possible subset size. Extending is linear in path length; unwinding removes
// one element exactly, so the whole sweep is quadratic in depth per leaf.
struct PathElement {
  int feature = -1;
  double zero_fraction = 0.0;
  double one_fraction = 0.0;
  double pweight = 0.0;
};

void extend_path(PathElement* path, int unique_depth, double zero_fraction,
                 double one_fraction, int feature) {
  path[unique_depth] = {feature, zero_fraction, one_fraction,
                        unique_depth == 0 ? 1.0 : 0.0};
  for (int i = unique_depth - 1; i >= 0; --i) {
    path[i + 1].pweight +=
        one_fraction * path[i].pweight * (i + 1) / static_cast<double>(unique_depth + 1);
    path[i].pweight = zero_fraction * path[i].pweight * (unique_depth - i) /
                      static_cast<double>(unique_depth + 1);
  }
}

void unwind_path(PathElement* path, int unique_depth, int path_index) {
  const double one_fraction = path[path_index].one_fraction;
  const double zero_fraction = path[path_index].zero_fraction;
  double next_one_portion = path[unique_depth].pweight;

  for (int i = unique_depth - 1; i >= 0; --i) {
    if (one_fraction != 0.0) {
      const double tmp = path[i].pweight;
      path[i].pweight = next_one_portion * (unique_depth + 1) /
                        static_cast<double>((i + 1) * one_fraction);
      next_one_portion = tmp - path[i].pweight * zero_fraction * (unique_depth - i) /
                                   static_cast<double>(unique_depth + 1);
    } else {
      path[i].pweight = (path[i].pweight * (unique_depth + 1)) /
                        (zero_fraction * (unique_depth - i));
    }
  }

  for (int i = path_index; i < unique_depth; ++i) {
    path[i].feature = path[i + 1].feature;
    path[i].zero_fraction = path[i + 1].zero_fraction;
    path[i].one_fraction = path[i + 1].one_fraction;
  }
}

double unwound_path_sum(const PathElement* path, int unique_depth, int path_index) {
  const double one_fraction = path[path_index].one_fraction;
  const double zero_fraction = path[path_index].zero_fraction;
  double next_one_portion = path[unique_depth].pweight;
  double total = 0.0;

  for (int i = unique_depth - 1; i >= 0; --i) {
    if (one_fraction != 0.0) {
      const double tmp = next_one_portion * (unique_depth + 1) /
                         static_cast<double>((i + 1) * one_fraction);
      total += tmp;
      next_one_portion = path[i].pweight -
                         tmp * zero_fraction *
                             ((unique_depth - i) / static_cast<double>(unique_depth + 1));
    } else if (zero_fraction != 0.0) {
      total += (path[i].pweight / zero_fraction) /
               ((unique_depth - i) / static_cast<double>(unique_depth + 1));
    }
  }
  return total;
}

void tree_shap_recurse(const std::vector<TreeNode>& nodes, std::span<const double> x,
                       double* phi, int node_index, int unique_depth,
                       PathElement* parent_path, double parent_zero_fraction,
                       double parent_one_fraction, int parent_feature) {
  const TreeNode& node = nodes[node_index];

  PathElement* path = parent_path + unique_depth + 1;
  std::copy(parent_path, parent_path + unique_depth + 1, path);
  extend_path(path, unique_depth, parent_zero_fraction, parent_one_fraction,
              parent_feature);

  if (node.is_leaf()) {
    for (int i = 1; i <= unique_depth; ++i) {
      const double w = unwound_path_sum(path, unique_depth, i);
      const PathElement& el = path[i];
      phi[el.feature] += w * (el.one_fraction - el.zero_fraction) * node.value;
    }
    return;
  }

  const int hot = x[static_cast<std::size_t>(node.feature)] < node.threshold
                      ? node.left
                      : node.right;
  const int cold = hot == node.left ? node.right : node.left;
  const double hot_zero_fraction = nodes[hot].cover / node.cover;
  const double cold_zero_fraction = nodes[cold].cover / node.cover;
  double incoming_zero_fraction = 1.0;
  double incoming_one_fraction = 1.0;

  // A feature met twice on one path is merged: unwind its previous element,
  // fold its fractions into the new one.
  int path_index = 0;
  for (; path_index <= unique_depth; ++path_index) {
    if (path[path_index].feature == node.feature) break;
  }
  if (path_index != unique_depth + 1) {
    incoming_zero_fraction = path[path_index].zero_fraction;
    incoming_one_fraction = path[path_index].one_fraction;
    unwind_path(path, unique_depth, path_index);
    unique_depth -= 1;
  }

  tree_shap_recurse(nodes, x, phi, hot, unique_depth + 1, path,
                    hot_zero_fraction * incoming_zero_fraction, incoming_one_fraction,
                    node.feature);
  tree_shap_recurse(nodes, x, phi, cold, unique_depth + 1, path,
                    cold_zero_fraction * incoming_zero_fraction, 0.0, node.feature);
}

// phi is accumulated in place (sized to the feature count).
void tree_shap_single(const TreeModel& model, std::span<const double> x, double* phi) {
  const int depth = model.depth();
  const int max_elements = ((depth + 2) * (depth + 3)) / 2;
  std::vector<PathElement> path_data(static_cast<std::size_t>(max_elements));
  tree_shap_recurse(model.nodes, x, phi, 0, 0, path_data.data(), 1.0, 1.0, -1);
}

void validate_row_width(std::size_t row_size, std::size_t n_features) {
  if (row_size != n_features) {
    throw InvalidArgument("attribution row has " + std::to_string(row_size) +
                          " values but the model expects " + std::to_string(n_features));
  }
}

// v(S): descend the tree; at a split on a feature outside S, average both
// children weighted by cover.
double subset_value(const std::vector<TreeNode>& nodes, int index,
                    std::span<const double> x, std::uint32_t mask) {
  const TreeNode& node = nodes[index];
  if (node.is_leaf()) return node.value;
  if ((mask >> node.feature) & 1u) {
    const int next = x[static_cast<std::size_t>(node.feature)] < node.threshold
                         ? node.left
                         : node.right;
    return subset_value(nodes, next, x, mask);
  }
  return (nodes[node.left].cover * subset_value(nodes, node.left, x, mask) +
          nodes[node.right].cover * subset_value(nodes, node.right, x, mask)) /
         node.cover;
}

// Exact Shapley values of one tree by enumerating all feature subsets.
void brute_single(const TreeModel& model, std::span<const double> x,
                  std::vector<double>& phi) {
  const std::size_t m = model.feature_names.size();
  if (m > 15) {
    throw InvalidArgument("exact Shapley enumeration supports at most 15 features, got " +
                          std::to_string(m));
  }
  const std::uint32_t n_subsets = 1u << m;

  std::vector<double> value(n_subsets);
  for (std::uint32_t mask = 0; mask < n_subsets; ++mask) {
    value[mask] = subset_value(model.nodes, 0, x, mask);
  }

  std::vector<double> factorial(m + 1, 1.0);
  for (std::size_t k = 1; k <= m; ++k) factorial[k] = factorial[k - 1] * k;
  std::vector<double> weight(m);
  for (std::size_t s = 0; s < m; ++s) {
    weight[s] = factorial[s] * factorial[m - s - 1] / factorial[m];
  }

  for (std::size_t i = 0; i < m; ++i) {
    const std::uint32_t bit = 1u << i;
    double total = 0.0;
    for (std::uint32_t mask = 0; mask < n_subsets; ++mask) {
      if (mask & bit) continue;
      const std::size_t size = static_cast<std::size_t>(std::popcount(mask));
      total += weight[size] * (value[mask | bit] - value[mask]);
    }
    phi[i] += total;
  }
}

OutputSpace resolve_space(AttributionSpace requested, OutputSpace native,
                          const char* model_kind) {
  if (requested == AttributionSpace::automatic) return native;
  const OutputSpace wanted =
      requested == AttributionSpace::margin ? OutputSpace::margin : OutputSpace::probability;
  if (wanted != native) {
    throw InvalidArgument(std::string(model_kind) +
                          " attributions are only additive in their native output space");
  }
  return native;
}

}  // namespace

double Attribution::phi_sum() const {
  return std::accumulate(phi.begin(), phi.end(), 0.0);
}

double expected_tree_value(const TreeModel& model) {
  if (model.nodes.empty()) throw ModelError("empty tree");
  check_covers(model.nodes);
  return expected_value(model.nodes, 0);
}

Attribution tree_shap_local(const TreeModel& model, std::span<const double> row,
                            AttributionSpace space) {
  if (model.nodes.empty()) throw ModelError("empty tree");
  validate_row_width(row.size(), model.feature_names.size());
  check_covers(model.nodes);
  resolve_space(space, OutputSpace::probability, "single-tree");

  Attribution out;
  out.features = model.feature_names;
  out.phi.assign(model.feature_names.size(), 0.0);
  out.space = OutputSpace::probability;
  out.base_value = expected_value(model.nodes, 0);
  out.output = model.predict_row(row);
  tree_shap_single(model, row, out.phi.data());
  return out;
}

Attribution tree_shap_local(const GbmModel& model, std::span<const double> row,
                            AttributionSpace space) {
  if (model.trees.empty()) throw ModelError("empty ensemble");
  validate_row_width(row.size(), model.feature_names.size());
  for (const TreeModel& tree : model.trees) check_covers(tree.nodes);
  resolve_space(space, OutputSpace::margin, "ensemble");

  Attribution out;
  out.features = model.feature_names;
  out.phi.assign(model.feature_names.size(), 0.0);
  out.space = OutputSpace::margin;
  out.base_value = model.base_score;
  out.output = model.margin_row(row);

  std::vector<double> tree_phi(model.feature_names.size());
  for (const TreeModel& tree : model.trees) {
    std::fill(tree_phi.begin(), tree_phi.end(), 0.0);
    tree_shap_single(tree, row, tree_phi.data());
    out.base_value += model.learning_rate * expected_value(tree.nodes, 0);
    for (std::size_t i = 0; i < tree_phi.size(); ++i) {
      out.phi[i] += model.learning_rate * tree_phi[i];
    }
  }
  return out;
}

Attribution shapley_brute_oracle(const TreeModel& model, std::span<const double> row) {
  if (model.nodes.empty()) throw ModelError("empty tree");
  validate_row_width(row.size(), model.feature_names.size());
  check_covers(model.nodes);

  Attribution out;
  out.features = model.feature_names;
  out.phi.assign(model.feature_names.size(), 0.0);
  out.space = OutputSpace::probability;
  out.base_value = expected_value(model.nodes, 0);
  out.output = model.predict_row(row);
  brute_single(model, row, out.phi);
  return out;
}

Attribution shapley_brute_oracle(const GbmModel& model, std::span<const double> row) {
  if (model.trees.empty()) throw ModelError("empty ensemble");
  validate_row_width(row.size(), model.feature_names.size());
  for (const TreeModel& tree : model.trees) check_covers(tree.nodes);

  Attribution out;
  out.features = model.feature_names;
  out.phi.assign(model.feature_names.size(), 0.0);
  out.space = OutputSpace::margin;
  out.base_value = model.base_score;
  out.output = model.margin_row(row);

  std::vector<double> tree_phi(model.feature_names.size());
  for (const TreeModel& tree : model.trees) {
    std::fill(tree_phi.begin(), tree_phi.end(), 0.0);
    brute_single(tree, row, tree_phi);
    out.base_value += model.learning_rate * expected_value(tree.nodes, 0);
    for (std::size_t i = 0; i < tree_phi.size(); ++i) {
      out.phi[i] += model.learning_rate * tree_phi[i];
    }
  }
  return out;
}

namespace {

template <typename Model>
std::vector<std::pair<std::string, double>> importance_impl(const Model& model,
                                                            const Frame& rows) {
  if (rows.n_rows() == 0) throw InvalidArgument("importance needs at least one row");
  const Matrix x = align_matrix(rows, model.feature_names);

  std::vector<double> mean_abs(model.feature_names.size(), 0.0);
  for (std::size_t r = 0; r < x.rows; ++r) {
    const Attribution attr = tree_shap_local(model, x.row(r));
    for (std::size_t i = 0; i < mean_abs.size(); ++i) {
      mean_abs[i] += std::abs(attr.phi[i]);
    }
  }
  for (double& v : mean_abs) v /= static_cast<double>(x.rows);

  std::vector<std::size_t> order(mean_abs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return mean_abs[a] > mean_abs[b];
  });

  std::vector<std::pair<std::string, double>> out;
  out.reserve(order.size());
  for (std::size_t i : order) out.emplace_back(model.feature_names[i], mean_abs[i]);
  return out;
}

}  // namespace

std::vector<std::pair<std::string, double>> global_importance(const TreeModel& model,
                                                              const Frame& rows) {
  return importance_impl(model, rows);
}

std::vector<std::pair<std::string, double>> global_importance(const GbmModel& model,
                                                              const Frame& rows) {
  return importance_impl(model, rows);
}

}  // namespace glassbox
