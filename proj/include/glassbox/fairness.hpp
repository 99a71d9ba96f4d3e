#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "glassbox/frame.hpp"

namespace glassbox {

// Which rows belong to the protected and reference groups: a row is in a
// group when its value in `feature` equals one of the listed values (level
// token match for categoricals, numeric equality otherwise). Rows matching
// neither list are excluded from the audit. A score at or above `cutoff`
// is a predicted positive, which here is the unfavorable outcome; favorable
// means predicted negative.
struct GroupSpec {
  std::string feature;
  std::vector<std::string> protected_values;
  std::vector<std::string> reference_values;
  double cutoff = 0.5;
};

enum class GroupTag { protected_group, reference_group, excluded };

std::vector<GroupTag> tag_rows(const Frame& rows, const GroupSpec& spec);

struct GroupCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t size() const { return tp + fp + tn + fn; }
  // Share of the group predicted negative.
  double favorable_rate() const;
  // fn / (fn + tn); empty when nobody is predicted negative.
  std::optional<double> false_omission_rate() const;
};

enum class BandFlag { pass, fail, not_evaluable };

// Four-fifths band check: a ratio passes when 0.8 <= ratio <= 1.25
// (both ends inclusive); an undefined ratio is not evaluable.
BandFlag four_fifths_flag(std::optional<double> ratio);

struct DisparityReport {
  GroupCounts protected_counts;
  GroupCounts reference_counts;
  std::size_t n_excluded = 0;
  double cutoff = 0.5;
  // Adverse impact ratio: protected favorable rate / reference favorable rate.
  std::optional<double> air;
  // Ratio of false omission rates, protected / reference.
  std::optional<double> for_disparity;
  BandFlag air_flag = BandFlag::not_evaluable;
  BandFlag for_flag = BandFlag::not_evaluable;
};

struct FairnessFlags {
  BandFlag air = BandFlag::not_evaluable;
  BandFlag for_disparity = BandFlag::not_evaluable;
};

FairnessFlags four_fifths_flags(const DisparityReport& report);

GroupCounts confusion_counts(std::span<const double> scores, std::span<const double> labels,
                             std::span<const GroupTag> tags, GroupTag group, double cutoff);

// Full audit of scores against labels for the given grouping.
DisparityReport audit_disparity(std::span<const double> scores,
                                std::span<const double> labels, const Frame& rows,
                                const GroupSpec& spec);

// Metric ratios and band flags from already-tallied confusion counts.
DisparityReport disparity_metrics(const GroupCounts& protected_counts,
                                  const GroupCounts& reference_counts,
                                  std::size_t n_excluded, double cutoff);

struct RemediationOptions {
  double step = 0.05;
  bool require_air = true;
  bool require_for = true;
};

struct RemediationResult {
  bool feasible = false;
  double original_cutoff = 0.0;
  double remediated_cutoff = 0.0;
  DisparityReport before;
  DisparityReport after;
  double accuracy_before = 0.0;
  double accuracy_after = 0.0;
  double auc_value = 0.0;
  std::string note;
};

// Scans cutoffs in steps away from the audited one (upward first, then
// downward) and returns the first cutoff whose required metric flags all
// pass. Ranking metrics (AUC) are cutoff-free and therefore untouched.
RemediationResult remediate_cutoff(std::span<const double> scores,
                                   std::span<const double> labels, const Frame& rows,
                                   const GroupSpec& spec,
                                   const RemediationOptions& options = {});

}  // namespace glassbox
