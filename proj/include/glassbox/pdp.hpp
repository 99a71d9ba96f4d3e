#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "glassbox/frame.hpp"
#include "glassbox/model_io.hpp"

namespace glassbox {

// Partial dependence and individual conditional expectation curves for one
// feature. `ice[r][j]` is the model output for row r with the feature forced
// to grid[j]; `pdp[j]` is the mean of that column. `divergence[j]` is the
// standard deviation over rows of the ICE curves after centering each at the
// leftmost grid point, so it is exactly zero at j = 0 and stays zero
// everywhere when the feature acts additively.
struct CurveSet {
  std::string feature;
  std::vector<double> grid;
  std::vector<double> pdp;
  std::vector<std::vector<double>> ice;
  std::vector<double> divergence;
};

// A maximal run of consecutive grid points whose ICE divergence exceeds the
// detection threshold; [lo, hi] are the grid values at the run ends.
struct InteractionRegion {
  std::size_t first = 0;
  std::size_t last = 0;
  double lo = 0.0;
  double hi = 0.0;
};

using RowScorer = std::function<double(std::span<const double>)>;

// Curves from an arbitrary scorer over a feature matrix (column index).
CurveSet pdp_ice(const RowScorer& scorer, const Matrix& x, std::size_t feature_index,
                 int grid_size);

// Curves from a trained model over a frame; the grid is built from the
// deduplicated quantiles of the feature across `rows`. Trees and GBMs are
// scored as probabilities, linear models as raw outputs.
CurveSet pdp_ice(const AnyModel& model, const Frame& rows, const std::string& feature,
                 int grid_size);

// Grid intervals where divergence exceeds factor x median(divergence).
// Divergence below an absolute floor of 1e-9 never qualifies, so additive
// models report no regions even in the presence of rounding noise.
std::vector<InteractionRegion> interaction_regions(const CurveSet& curves,
                                                   double factor = 2.0);

// Deduplicated quantile grid of the given values.
std::vector<double> quantile_grid(std::vector<double> values, int grid_size);

}  // namespace glassbox
