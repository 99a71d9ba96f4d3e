#include "glassbox/linear.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "glassbox/errors.hpp"

namespace glassbox {

double LinearModel::predict_row(std::span<const double> x) const {
  double v = intercept;
  for (std::size_t j = 0; j < coefficients.size(); ++j) v += coefficients[j] * x[j];
  return v;
}

std::vector<double> predict_linear(const LinearModel& model, const Frame& rows) {
  const Matrix m = align_matrix(rows, model.feature_names);
  std::vector<double> out(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) out[r] = model.predict_row(m.row(r));
  return out;
}

std::vector<double> predict_linear_clamped(const LinearModel& model, const Frame& rows) {
  std::vector<double> out = predict_linear(model, rows);
  for (double& v : out) v = std::clamp(v, 0.0, 1.0);
  return out;
}

namespace {

// Solves the (p+1)-dimensional normal equations with the intercept in the
// last slot and the penalty applied to the p feature coefficients only.
Eigen::VectorXd solve_normal_equations(const Matrix& x,
                                       const std::vector<std::size_t>& active,
                                       std::span<const double> y,
                                       std::span<const double> w, double l2) {
  const std::size_t p = active.size();
  Eigen::MatrixXd xtx = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p) + 1,
                                              static_cast<Eigen::Index>(p) + 1);
  Eigen::VectorXd xty = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p) + 1);

  Eigen::VectorXd xr(static_cast<Eigen::Index>(p) + 1);
  for (std::size_t r = 0; r < x.rows; ++r) {
    if (w[r] == 0.0) continue;
    for (std::size_t j = 0; j < p; ++j) xr[static_cast<Eigen::Index>(j)] = x.at(r, active[j]);
    xr[static_cast<Eigen::Index>(p)] = 1.0;
    xtx.noalias() += w[r] * (xr * xr.transpose());
    xty.noalias() += (w[r] * y[r]) * xr;
  }
  for (std::size_t j = 0; j < p; ++j) {
    xtx(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) += l2;
  }

  if (l2 == 0.0) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(xtx);
    if (!lu.isInvertible()) {
      throw InvalidArgument(
          "singular normal equations with l2 = 0; retry with a positive ridge strength");
    }
    return lu.solve(xty);
  }
  return xtx.ldlt().solve(xty);
}

}  // namespace

LinearModel fit_linear_weighted(const Matrix& x, std::span<const double> y,
                                std::span<const double> weights,
                                const LinearOptions& options) {
  if (x.rows != y.size() || x.rows != weights.size()) {
    throw InvalidArgument("design matrix, targets and weights disagree on row count");
  }
  if (options.l2 < 0.0) throw InvalidArgument("l2 must be >= 0");

  double wsum = 0.0;
  for (double w : weights) {
    if (w < 0.0 || !std::isfinite(w)) throw InvalidArgument("weights must be finite and >= 0");
    wsum += w;
  }
  if (wsum <= 0.0) throw InvalidArgument("at least one weight must be positive");

  std::vector<std::size_t> active(x.cols);
  std::iota(active.begin(), active.end(), std::size_t{0});

  if (options.top_k > 0 && static_cast<std::size_t>(options.top_k) < x.cols) {
    const Eigen::VectorXd prelim = solve_normal_equations(x, active, y, weights, options.l2);
    // Weighted std per feature, so ranking is scale-free.
    std::vector<double> score(x.cols);
    for (std::size_t j = 0; j < x.cols; ++j) {
      double mean = 0.0;
      for (std::size_t r = 0; r < x.rows; ++r) mean += weights[r] * x.at(r, j);
      mean /= wsum;
      double var = 0.0;
      for (std::size_t r = 0; r < x.rows; ++r) {
        const double d = x.at(r, j) - mean;
        var += weights[r] * d * d;
      }
      score[j] = std::abs(prelim[static_cast<Eigen::Index>(j)]) * std::sqrt(var / wsum);
    }
    std::sort(active.begin(), active.end(), [&](std::size_t a, std::size_t b) {
      if (score[a] != score[b]) return score[a] > score[b];
      return a < b;
    });
    active.resize(static_cast<std::size_t>(options.top_k));
    std::sort(active.begin(), active.end());
  }

  const Eigen::VectorXd beta = solve_normal_equations(x, active, y, weights, options.l2);

  LinearModel model;
  model.n_fit = x.rows;
  for (std::size_t j = 0; j < active.size(); ++j) {
    model.feature_names.push_back(x.names[active[j]]);
    model.coefficients.push_back(beta[static_cast<Eigen::Index>(j)]);
  }
  model.intercept = beta[static_cast<Eigen::Index>(active.size())];

  double ymean = 0.0;
  for (std::size_t r = 0; r < x.rows; ++r) ymean += weights[r] * y[r];
  ymean /= wsum;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t r = 0; r < x.rows; ++r) {
    double pred = model.intercept;
    for (std::size_t j = 0; j < active.size(); ++j) {
      pred += model.coefficients[j] * x.at(r, active[j]);
    }
    ss_res += weights[r] * (y[r] - pred) * (y[r] - pred);
    ss_tot += weights[r] * (y[r] - ymean) * (y[r] - ymean);
  }
  model.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
  return model;
}

}  // namespace glassbox
