#pragma once

#include <span>
#include <vector>

namespace glassbox {

// Rank-based Mann-Whitney AUC; tied scores contribute 1/2. Throws when only
// one class is present.
double auc(std::span<const double> scores, std::span<const double> labels);

// Fraction correct at the given probability cutoff (score >= cutoff predicts 1).
double accuracy(std::span<const double> scores, std::span<const double> labels, double cutoff);

// Mean Bernoulli negative log-likelihood; probabilities clamped away from 0/1.
double mean_log_loss(std::span<const double> probabilities, std::span<const double> labels);

}  // namespace glassbox
