#include "glassbox/gbm.hpp"

#include <cmath>

#include "glassbox/errors.hpp"
#include "tree_builder.hpp"

namespace glassbox {

double GbmModel::margin_row(std::span<const double> x) const {
  double sum = 0.0;
  for (const TreeModel& t : trees) sum += t.predict_row(x);
  return base_score + learning_rate * sum;
}

std::vector<double> predict_margin(const GbmModel& model, const Frame& rows) {
  const Matrix m = align_matrix(rows, model.feature_names);
  std::vector<double> out(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) out[r] = model.margin_row(m.row(r));
  return out;
}

std::vector<double> predict(const GbmModel& model, const Frame& rows) {
  std::vector<double> out = predict_margin(model, rows);
  for (double& v : out) v = sigmoid(v);
  return out;
}

GbmModel train_gbm(const Frame& train, const GbmParams& params) {
  if (train.n_rows() == 0) throw DataError("cannot train on an empty frame");
  if (params.n_rounds < 1) throw InvalidArgument("n_rounds must be >= 1");
  if (params.max_depth < 1) throw InvalidArgument("max_depth must be >= 1");
  if (params.learning_rate <= 0.0) throw InvalidArgument("learning_rate must be > 0");
  if (params.l2 < 0.0) throw InvalidArgument("l2 must be >= 0");
  if (!train.target_index()) throw DataError("training frame has no target column");

  const Matrix x = design_matrix(train);
  const std::vector<double> y = train.target_values();
  const std::size_t n = x.rows;

  double positives = 0.0;
  for (double v : y) positives += v;
  if (positives == 0.0 || positives == static_cast<double>(n)) {
    throw DataError("target has a single class, logistic boosting is undefined");
  }

  std::vector<int> monotone_by_index(x.cols, 0);
  bool any_constraint = false;
  for (const auto& [name, dir] : params.monotone) {
    if (dir < -1 || dir > 1) throw InvalidArgument("monotone direction must be -1, 0 or +1");
    bool found = false;
    for (std::size_t j = 0; j < x.cols; ++j) {
      if (x.names[j] == name) {
        monotone_by_index[j] = dir;
        found = true;
        break;
      }
    }
    // align_matrix already rejected non-ordinal columns; this catches typos.
    if (!found) throw InvalidArgument("monotone constraint on unknown feature '" + name + "'");
    if (dir != 0) any_constraint = true;
  }

  GbmModel model;
  model.learning_rate = params.learning_rate;
  model.monotone = params.monotone;
  model.feature_names = x.names;
  const double prevalence = positives / static_cast<double>(n);
  model.base_score = std::log(prevalence / (1.0 - prevalence));

  detail::BuilderConfig cfg;
  cfg.criterion = detail::SplitCriterion::gbm_logistic;
  cfg.max_depth = params.max_depth;
  cfg.min_samples_leaf = params.min_samples_leaf;
  cfg.lambda = params.l2;
  if (any_constraint) cfg.monotone = monotone_by_index;

  const detail::Presort ps = detail::presort(x);

  std::vector<double> margin(n, model.base_score);
  std::vector<double> grad(n), hess(n);
  for (int round = 0; round < params.n_rounds; ++round) {
    for (std::size_t r = 0; r < n; ++r) {
      const double p = sigmoid(margin[r]);
      grad[r] = p - y[r];
      hess[r] = p * (1.0 - p);
    }
    TreeModel tree;
    tree.nodes = detail::build_tree(x, ps, grad, hess, cfg);
    tree.feature_names = x.names;
    tree.max_depth = params.max_depth;
    tree.task = TreeTask::regression;

    for (std::size_t r = 0; r < n; ++r) {
      margin[r] += params.learning_rate * tree.predict_row(x.row(r));
    }
    model.trees.push_back(std::move(tree));
  }
  return model;
}

}  // namespace glassbox
