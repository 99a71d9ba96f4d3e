#include "glassbox/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "glassbox/errors.hpp"

namespace glassbox {

double auc(std::span<const double> scores, std::span<const double> labels) {
  if (scores.size() != labels.size()) throw InvalidArgument("scores/labels length mismatch");
  const std::size_t n = scores.size();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Average ranks over tie groups (1-based).
  std::vector<double> rank(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + 1 + j + 1);
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
    i = j + 1;
  }

  double n_pos = 0.0, rank_sum_pos = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (labels[k] == 1.0) {
      n_pos += 1.0;
      rank_sum_pos += rank[k];
    }
  }
  const double n_neg = static_cast<double>(n) - n_pos;
  if (n_pos == 0.0 || n_neg == 0.0) {
    throw InvalidArgument("AUC requires both classes to be present");
  }
  const double u = rank_sum_pos - n_pos * (n_pos + 1.0) / 2.0;
  return u / (n_pos * n_neg);
}

double accuracy(std::span<const double> scores, std::span<const double> labels, double cutoff) {
  if (scores.size() != labels.size()) throw InvalidArgument("scores/labels length mismatch");
  if (scores.empty()) throw InvalidArgument("accuracy of an empty set is undefined");
  std::size_t correct = 0;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    const double pred = scores[k] >= cutoff ? 1.0 : 0.0;
    if (pred == labels[k]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(scores.size());
}

double mean_log_loss(std::span<const double> probabilities, std::span<const double> labels) {
  if (probabilities.size() != labels.size()) {
    throw InvalidArgument("probabilities/labels length mismatch");
  }
  if (probabilities.empty()) throw InvalidArgument("log loss of an empty set is undefined");
  double sum = 0.0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    const double p = std::clamp(probabilities[k], 1e-15, 1.0 - 1e-15);
    sum += labels[k] == 1.0 ? -std::log(p) : -std::log(1.0 - p);
  }
  return sum / static_cast<double>(probabilities.size());
}

}  // namespace glassbox
