#include "glassbox/fairness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "glassbox/errors.hpp"
#include "glassbox/metrics.hpp"

namespace glassbox {

namespace {

std::optional<double> parse_value(const std::string& text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (!text.empty() && text.front() == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

// True when the row's value in `col` equals the requested value string.
bool matches_value(const Column& col, std::size_t row, const std::string& wanted,
                   std::optional<double> wanted_number) {
  if (col.role == Role::categorical) {
    const auto code = static_cast<std::size_t>(col.values[row]);
    if (col.levels[code] == wanted) return true;
    if (wanted_number.has_value() && col.levels_numeric()) {
      return col.level_values[code] == *wanted_number;
    }
    return false;
  }
  return wanted_number.has_value() && col.values[row] == *wanted_number;
}

}  // namespace

std::vector<GroupTag> tag_rows(const Frame& rows, const GroupSpec& spec) {
  if (spec.protected_values.empty() || spec.reference_values.empty()) {
    throw InvalidArgument("both protected and reference value lists must be non-empty");
  }
  if (!rows.has_column(spec.feature)) {
    throw InvalidArgument("group feature '" + spec.feature + "' is not in the data");
  }
  const Column& col = rows.column(spec.feature);

  const auto parse_all = [](const std::vector<std::string>& values) {
    std::vector<std::optional<double>> out;
    out.reserve(values.size());
    for (const std::string& v : values) out.push_back(parse_value(v));
    return out;
  };
  const auto protected_numbers = parse_all(spec.protected_values);
  const auto reference_numbers = parse_all(spec.reference_values);

  std::vector<GroupTag> tags(rows.n_rows(), GroupTag::excluded);
  for (std::size_t r = 0; r < rows.n_rows(); ++r) {
    bool in_protected = false;
    for (std::size_t i = 0; i < spec.protected_values.size(); ++i) {
      if (matches_value(col, r, spec.protected_values[i], protected_numbers[i])) {
        in_protected = true;
        break;
      }
    }
    bool in_reference = false;
    for (std::size_t i = 0; i < spec.reference_values.size(); ++i) {
      if (matches_value(col, r, spec.reference_values[i], reference_numbers[i])) {
        in_reference = true;
        break;
      }
    }
    if (in_protected && in_reference) {
      throw InvalidArgument("protected and reference values overlap on feature '" +
                            spec.feature + "'");
    }
    if (in_protected) tags[r] = GroupTag::protected_group;
    else if (in_reference) tags[r] = GroupTag::reference_group;
  }
  return tags;
}

double GroupCounts::favorable_rate() const {
  return static_cast<double>(tn + fn) / static_cast<double>(size());
}

std::optional<double> GroupCounts::false_omission_rate() const {
  const std::size_t negatives = tn + fn;
  if (negatives == 0) return std::nullopt;
  return static_cast<double>(fn) / static_cast<double>(negatives);
}

BandFlag four_fifths_flag(std::optional<double> ratio) {
  if (!ratio.has_value()) return BandFlag::not_evaluable;
  return (*ratio >= 0.8 && *ratio <= 1.25) ? BandFlag::pass : BandFlag::fail;
}

FairnessFlags four_fifths_flags(const DisparityReport& report) {
  FairnessFlags flags;
  flags.air = four_fifths_flag(report.air);
  flags.for_disparity = four_fifths_flag(report.for_disparity);
  return flags;
}

GroupCounts confusion_counts(std::span<const double> scores, std::span<const double> labels,
                             std::span<const GroupTag> tags, GroupTag group, double cutoff) {
  if (scores.size() != labels.size() || scores.size() != tags.size()) {
    throw InvalidArgument("scores, labels and tags differ in length");
  }
  GroupCounts counts;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (tags[i] != group) continue;
    const double y = labels[i];
    if (y != 0.0 && y != 1.0) throw InvalidArgument("labels must be 0 or 1");
    const bool positive = scores[i] >= cutoff;
    if (positive) {
      y == 1.0 ? ++counts.tp : ++counts.fp;
    } else {
      y == 1.0 ? ++counts.fn : ++counts.tn;
    }
  }
  return counts;
}

DisparityReport disparity_metrics(const GroupCounts& protected_counts,
                                  const GroupCounts& reference_counts,
                                  std::size_t n_excluded, double cutoff) {
  if (protected_counts.size() == 0) throw DataError("protected group is empty");
  if (reference_counts.size() == 0) throw DataError("reference group is empty");

  DisparityReport report;
  report.protected_counts = protected_counts;
  report.reference_counts = reference_counts;
  report.n_excluded = n_excluded;
  report.cutoff = cutoff;

  const double fav_protected = protected_counts.favorable_rate();
  const double fav_reference = reference_counts.favorable_rate();
  if (fav_reference > 0.0) {
    report.air = fav_protected / fav_reference;
  }

  const auto for_protected = protected_counts.false_omission_rate();
  const auto for_reference = reference_counts.false_omission_rate();
  if (for_protected.has_value() && for_reference.has_value() && *for_reference > 0.0) {
    report.for_disparity = *for_protected / *for_reference;
  }

  const FairnessFlags flags = four_fifths_flags(report);
  report.air_flag = flags.air;
  report.for_flag = flags.for_disparity;
  return report;
}

DisparityReport audit_disparity(std::span<const double> scores,
                                std::span<const double> labels, const Frame& rows,
                                const GroupSpec& spec) {
  if (scores.size() != rows.n_rows()) {
    throw InvalidArgument("scores and frame differ in length");
  }
  const std::vector<GroupTag> tags = tag_rows(rows, spec);
  const GroupCounts protected_counts =
      confusion_counts(scores, labels, tags, GroupTag::protected_group, spec.cutoff);
  const GroupCounts reference_counts =
      confusion_counts(scores, labels, tags, GroupTag::reference_group, spec.cutoff);
  std::size_t excluded = 0;
  for (const GroupTag tag : tags) {
    if (tag == GroupTag::excluded) ++excluded;
  }
  return disparity_metrics(protected_counts, reference_counts, excluded, spec.cutoff);
}

namespace {

bool flags_satisfied(const DisparityReport& report, const RemediationOptions& options) {
  if (options.require_air && report.air_flag != BandFlag::pass) return false;
  if (options.require_for && report.for_flag != BandFlag::pass) return false;
  return true;
}

}  // namespace

RemediationResult remediate_cutoff(std::span<const double> scores,
                                   std::span<const double> labels, const Frame& rows,
                                   const GroupSpec& spec,
                                   const RemediationOptions& options) {
  if (!(options.step > 0.0)) throw InvalidArgument("remediation step must be positive");
  if (!options.require_air && !options.require_for) {
    throw InvalidArgument("remediation needs at least one metric to satisfy");
  }

  const std::vector<GroupTag> tags = tag_rows(rows, spec);
  std::size_t excluded = 0;
  for (const GroupTag tag : tags) {
    if (tag == GroupTag::excluded) ++excluded;
  }

  const auto report_at = [&](double cutoff) {
    const GroupCounts p =
        confusion_counts(scores, labels, tags, GroupTag::protected_group, cutoff);
    const GroupCounts r =
        confusion_counts(scores, labels, tags, GroupTag::reference_group, cutoff);
    return disparity_metrics(p, r, excluded, cutoff);
  };

  RemediationResult result;
  result.original_cutoff = spec.cutoff;
  result.before = report_at(spec.cutoff);
  result.accuracy_before = accuracy(scores, labels, spec.cutoff);
  result.auc_value = auc(scores, labels);

  const auto try_cutoff = [&](double cutoff) {
    const DisparityReport candidate = report_at(cutoff);
    if (!flags_satisfied(candidate, options)) return false;
    result.feasible = true;
    result.remediated_cutoff = cutoff;
    result.after = candidate;
    result.accuracy_after = accuracy(scores, labels, cutoff);
    return true;
  };

  // Upward first: raising the bar for a predicted positive enlarges both
  // groups' favorable pools, the usual fix when the protected group is
  // flagged short of favorable outcomes. Candidates are formed as
  // cutoff + k * step in one multiply-add so repeated scans hit identical
  // grid values.
  const double tiny = options.step * 1e-9;
  for (std::size_t k = 0;; ++k) {
    const double cutoff = spec.cutoff + static_cast<double>(k) * options.step;
    if (cutoff > 1.0 + tiny) break;
    if (try_cutoff(cutoff)) {
      result.note = k == 0 ? "already within band at the audited cutoff"
                           : "raised cutoff until all required ratios fall in band";
      return result;
    }
  }
  for (std::size_t k = 1;; ++k) {
    const double cutoff = spec.cutoff - static_cast<double>(k) * options.step;
    if (cutoff < -tiny) break;
    if (try_cutoff(cutoff)) {
      result.note = "lowered cutoff until all required ratios fall in band";
      return result;
    }
  }

  result.feasible = false;
  result.remediated_cutoff = spec.cutoff;
  result.after = result.before;
  result.accuracy_after = result.accuracy_before;
  result.note = "no cutoff on the scanned grid brings every required ratio in band";
  return result;
}

}  // namespace glassbox
