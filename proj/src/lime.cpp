#include "glassbox/lime.hpp"

#include <algorithm>
#include <cmath>

#include "glassbox/errors.hpp"
#include "glassbox/random.hpp"

namespace glassbox {

LimeResult lime_segment(const AnyModel& reference, const Frame& segment,
                        const std::vector<std::string>& one_hot_columns, int top_k,
                        double l2) {
  if (segment.n_rows() == 0) throw InvalidArgument("segment is empty");
  if (!(l2 >= 0.0)) throw InvalidArgument("ridge strength must be non-negative");

  const std::vector<std::string> names = model_features(reference);
  const Matrix x = align_matrix(segment, names);
  std::vector<double> y(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) y[r] = predict_proba(reference, x.row(r));

  const Frame encoded = one_hot_encode(segment, one_hot_columns);
  std::vector<std::string> exclude;
  if (encoded.target_index().has_value()) {
    exclude.push_back(encoded.columns()[*encoded.target_index()].name);
  }
  Matrix design = design_matrix(encoded, exclude);

  // Center every column on its segment mean. Slopes are unaffected, but the
  // intercept then reads as the fitted value for an average segment member
  // instead of an extrapolation to the all-zero row.
  for (std::size_t j = 0; j < design.cols; ++j) {
    double mean = 0.0;
    for (std::size_t r = 0; r < design.rows; ++r) mean += design.at(r, j);
    mean /= static_cast<double>(design.rows);
    for (std::size_t r = 0; r < design.rows; ++r) design.data[r * design.cols + j] -= mean;
  }

  const std::vector<double> weights(design.rows, 1.0);
  LinearOptions options;
  options.l2 = l2;
  options.top_k = top_k;

  LimeResult out;
  out.model = fit_linear_weighted(design, y, weights, options);
  out.mode = LimeMode::segment;
  out.r_squared = out.model.r_squared;
  out.intercept = out.model.intercept;
  out.n_samples = design.rows;
  return out;
}

LimeResult lime_perturb(const AnyModel& reference, const Frame& background,
                        std::size_t anchor_row, std::size_t n_samples,
                        double kernel_width, int top_k, std::uint64_t seed, double l2) {
  if (background.n_rows() == 0) throw InvalidArgument("background frame is empty");
  if (anchor_row >= background.n_rows()) {
    throw InvalidArgument("anchor row index out of range");
  }
  if (!(kernel_width > 0.0)) throw InvalidArgument("kernel width must be positive");
  if (!(l2 >= 0.0)) throw InvalidArgument("ridge strength must be non-negative");

  const std::vector<std::string> names = model_features(reference);
  const Matrix x = align_matrix(background, names);
  const std::size_t p = x.cols;

  const std::size_t fitted = top_k > 0 ? std::min<std::size_t>(top_k, p) : p;
  if (n_samples < fitted + 1) {
    throw InvalidArgument("need at least " + std::to_string(fitted + 1) +
                          " samples to fit " + std::to_string(fitted) + " coefficients");
  }

  // Per-feature spread over the background distribution; constant features
  // stay pinned at the anchor value.
  std::vector<double> sd(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    double mean = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) mean += x.at(r, j);
    mean /= static_cast<double>(x.rows);
    double ss = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) {
      const double d = x.at(r, j) - mean;
      ss += d * d;
    }
    sd[j] = std::sqrt(ss / static_cast<double>(x.rows));
  }

  std::vector<double> anchor(p);
  {
    const auto src = x.row(anchor_row);
    std::copy(src.begin(), src.end(), anchor.begin());
  }

  Matrix samples;
  samples.names = names;
  samples.rows = n_samples;
  samples.cols = p;
  samples.data.reserve(n_samples * p);
  samples.data.insert(samples.data.end(), anchor.begin(), anchor.end());

  Rng rng(seed);
  for (std::size_t s = 1; s < n_samples; ++s) {
    for (std::size_t j = 0; j < p; ++j) {
      samples.data.push_back(anchor[j] + rng.normal() * sd[j]);
    }
  }

  std::vector<double> y(n_samples);
  std::vector<double> weights(n_samples);
  for (std::size_t s = 0; s < n_samples; ++s) {
    const auto row = samples.row(s);
    y[s] = predict_proba(reference, row);
    double d2 = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      if (sd[j] == 0.0) continue;
      const double z = (row[j] - anchor[j]) / sd[j];
      d2 += z * z;
    }
    weights[s] = std::exp(-d2 / (kernel_width * kernel_width));
  }

  LinearOptions options;
  options.l2 = l2;
  options.top_k = top_k;

  LimeResult out;
  out.model = fit_linear_weighted(samples, y, weights, options);
  out.mode = LimeMode::perturbation;
  out.anchor = std::move(anchor);
  out.kernel_width = kernel_width;
  out.r_squared = out.model.r_squared;
  out.intercept = out.model.intercept;
  out.n_samples = n_samples;
  return out;
}

}  // namespace glassbox
