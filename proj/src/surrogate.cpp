#include "glassbox/surrogate.hpp"

#include <cmath>
#include <vector>

#include "glassbox/errors.hpp"

namespace glassbox {

SurrogateFit fit_surrogate_tree(const AnyModel& reference, const Frame& rows, int depth) {
  if (rows.n_rows() == 0) throw InvalidArgument("surrogate fitting needs at least one row");
  if (depth < 1) throw InvalidArgument("surrogate depth must be at least 1");

  const std::vector<std::string> names = model_features(reference);
  const Matrix x = align_matrix(rows, names);

  std::vector<double> target(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) target[r] = predict_proba(reference, x.row(r));

  std::vector<std::size_t> train_rows, eval_rows;
  for (std::size_t r = 0; r < x.rows; ++r) {
    (r % 2 == 0 ? train_rows : eval_rows).push_back(r);
  }

  Matrix train_x;
  train_x.names = names;
  train_x.rows = train_rows.size();
  train_x.cols = x.cols;
  train_x.data.reserve(train_rows.size() * x.cols);
  std::vector<double> train_y;
  train_y.reserve(train_rows.size());
  for (std::size_t r : train_rows) {
    const auto src = x.row(r);
    train_x.data.insert(train_x.data.end(), src.begin(), src.end());
    train_y.push_back(target[r]);
  }

  TreeParams params;
  params.max_depth = depth;
  params.min_samples_leaf = 1;

  SurrogateFit fit;
  fit.surrogate = train_regression_tree(train_x, train_y, params);
  fit.reference_kind = model_kind(reference);
  fit.n_train = train_rows.size();
  fit.n_eval = eval_rows.size();

  // With a single row there is nothing held out; fidelity degenerates to the
  // training row itself.
  const std::vector<std::size_t>& score_rows = eval_rows.empty() ? train_rows : eval_rows;

  double mean = 0.0;
  for (std::size_t r : score_rows) mean += target[r];
  mean /= static_cast<double>(score_rows.size());

  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t r : score_rows) {
    const double predicted = fit.surrogate.predict_row(x.row(r));
    const double err = target[r] - predicted;
    ss_res += err * err;
    const double dev = target[r] - mean;
    ss_tot += dev * dev;
  }
  fit.fidelity_rmse = std::sqrt(ss_res / static_cast<double>(score_rows.size()));
  fit.fidelity_r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
  return fit;
}

}  // namespace glassbox
