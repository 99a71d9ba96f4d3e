#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "glassbox/frame.hpp"
#include "glassbox/linear.hpp"
#include "glassbox/model_io.hpp"

namespace glassbox {

enum class LimeMode { segment, perturbation };

// A local linear approximation of a reference model, either over a data
// segment (one-hot encoded categoricals, unit weights) or around a single
// anchor row (Gaussian perturbations with distance-kernel weights).
struct LimeResult {
  LinearModel model;
  LimeMode mode = LimeMode::segment;
  std::string segment_description;   // segment mode
  std::vector<double> anchor;        // perturbation mode, model-feature order
  double kernel_width = 0.0;         // perturbation mode
  double r_squared = 0.0;
  double intercept = 0.0;
  std::size_t n_samples = 0;
};

// Fits a sparse linear model to the reference model's probabilities over the
// rows of `segment`. Columns named in `one_hot_columns` are expanded into
// 0/1 level indicators first, and every design column is centered on its
// segment mean, so the intercept is the fitted value for an average segment
// member. A small default ridge keeps the one-hot design (which is collinear
// with the intercept) well posed.
LimeResult lime_segment(const AnyModel& reference, const Frame& segment,
                        const std::vector<std::string>& one_hot_columns, int top_k,
                        double l2 = 1e-6);

// Fits a weighted linear model around background row `anchor_row`. Samples
// are drawn as anchor + N(0,1) * sd(feature over background); the anchor
// itself is included unperturbed as the first sample. Weights are
// exp(-d^2 / kernel_width^2) with d the standardized Euclidean distance to
// the anchor.
LimeResult lime_perturb(const AnyModel& reference, const Frame& background,
                        std::size_t anchor_row, std::size_t n_samples,
                        double kernel_width, int top_k, std::uint64_t seed,
                        double l2 = 1e-6);

}  // namespace glassbox
