#pragma once

#include <span>
#include <string>
#include <vector>

#include "glassbox/frame.hpp"

namespace glassbox {

struct LinearModel {
  std::vector<std::string> feature_names;  // selected features, design order
  std::vector<double> coefficients;        // aligned with feature_names
  double intercept = 0.0;
  double r_squared = 0.0;  // weighted, 0 under zero weighted target variance
  std::size_t n_fit = 0;

  double predict_row(std::span<const double> x) const;
};

struct LinearOptions {
  double l2 = 0.0;  // ridge strength; intercept never penalized
  int top_k = 0;    // 0 = keep all; else refit on the k largest |standardized coef|
};

// Weighted least squares with a ridge penalty, solved by normal equations.
// With top_k > 0 a preliminary fit ranks features by |coefficient| *
// weighted std and the model is refit on the winners (ties broken by lowest
// feature index). Throws on a singular system when l2 == 0; retry with
// l2 > 0.
LinearModel fit_linear_weighted(const Matrix& x, std::span<const double> y,
                                std::span<const double> weights,
                                const LinearOptions& options);

std::vector<double> predict_linear(const LinearModel& model, const Frame& rows);
// Linear output clamped to [0,1]; reporting convenience only.
std::vector<double> predict_linear_clamped(const LinearModel& model, const Frame& rows);

}  // namespace glassbox
