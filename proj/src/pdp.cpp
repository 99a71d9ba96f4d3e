#include "glassbox/pdp.hpp"

#include <algorithm>
#include <cmath>

#include "glassbox/errors.hpp"

namespace glassbox {

namespace {

constexpr double kDivergenceFloor = 1e-9;

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

std::vector<double> quantile_grid(std::vector<double> values, int grid_size) {
  if (values.empty()) throw InvalidArgument("quantile grid needs at least one value");
  if (grid_size < 2) throw InvalidArgument("grid size must be at least 2");
  std::sort(values.begin(), values.end());

  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(grid_size));
  const std::size_t n = values.size();
  for (int j = 0; j < grid_size; ++j) {
    // Linear interpolation between order statistics.
    const double pos = static_cast<double>(j) / (grid_size - 1) * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double frac = pos - static_cast<double>(lo);
    const double q = values[lo] + frac * (values[hi] - values[lo]);
    if (grid.empty() || q > grid.back()) grid.push_back(q);
  }
  return grid;
}

CurveSet pdp_ice(const RowScorer& scorer, const Matrix& x, std::size_t feature_index,
                 int grid_size) {
  if (x.rows == 0) throw InvalidArgument("partial dependence needs at least one row");
  if (feature_index >= x.cols) {
    throw InvalidArgument("feature index out of range");
  }

  std::vector<double> feature_values(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) feature_values[r] = x.at(r, feature_index);

  CurveSet out;
  out.feature = x.names[feature_index];
  out.grid = quantile_grid(std::move(feature_values), grid_size);

  const std::size_t g = out.grid.size();
  out.ice.assign(x.rows, std::vector<double>(g, 0.0));
  out.pdp.assign(g, 0.0);
  out.divergence.assign(g, 0.0);

  std::vector<double> row(x.cols);
  for (std::size_t r = 0; r < x.rows; ++r) {
    const auto src = x.row(r);
    std::copy(src.begin(), src.end(), row.begin());
    for (std::size_t j = 0; j < g; ++j) {
      row[feature_index] = out.grid[j];
      out.ice[r][j] = scorer(row);
    }
  }

  for (std::size_t j = 0; j < g; ++j) {
    double total = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) total += out.ice[r][j];
    out.pdp[j] = total / static_cast<double>(x.rows);
  }

  // Divergence: std over rows of ICE centered at the leftmost grid point.
  for (std::size_t j = 0; j < g; ++j) {
    double mean = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) mean += out.ice[r][j] - out.ice[r][0];
    mean /= static_cast<double>(x.rows);
    double ss = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) {
      const double d = (out.ice[r][j] - out.ice[r][0]) - mean;
      ss += d * d;
    }
    out.divergence[j] = std::sqrt(ss / static_cast<double>(x.rows));
  }
  return out;
}

CurveSet pdp_ice(const AnyModel& model, const Frame& rows, const std::string& feature,
                 int grid_size) {
  const std::vector<std::string> names = model_features(model);
  if (std::find(names.begin(), names.end(), feature) == names.end()) {
    throw InvalidArgument("feature '" + feature + "' is not a model input");
  }
  const Matrix x = align_matrix(rows, names);
  const std::size_t index =
      static_cast<std::size_t>(std::find(names.begin(), names.end(), feature) - names.begin());
  RowScorer scorer = [&model](std::span<const double> row) {
    return predict_proba(model, row);
  };
  return pdp_ice(scorer, x, index, grid_size);
}

std::vector<InteractionRegion> interaction_regions(const CurveSet& curves, double factor) {
  if (curves.grid.size() < 2) {
    throw InvalidArgument("interaction scan needs at least two grid points");
  }
  if (!(factor > 0.0)) throw InvalidArgument("interaction factor must be positive");

  const double median = median_of(curves.divergence);
  const double threshold = std::max(factor * median, kDivergenceFloor);

  std::vector<InteractionRegion> regions;
  std::size_t j = 0;
  const std::size_t g = curves.grid.size();
  while (j < g) {
    if (curves.divergence[j] > threshold) {
      InteractionRegion region;
      region.first = j;
      while (j + 1 < g && curves.divergence[j + 1] > threshold) ++j;
      region.last = j;
      region.lo = curves.grid[region.first];
      region.hi = curves.grid[region.last];
      regions.push_back(region);
    }
    ++j;
  }
  return regions;
}

}  // namespace glassbox
