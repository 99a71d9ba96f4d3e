#include <doctest.h>

#include <cmath>
#include <vector>

#include "glassbox/errors.hpp"
#include "glassbox/fairness.hpp"
#include "glassbox/metrics.hpp"
#include "helpers.hpp"

using namespace glassbox;

namespace {

Frame group_frame(const std::vector<double>& group_values) {
  std::vector<double> x(group_values.size(), 0.0);
  std::vector<double> y(group_values.size(), 0.0);
  if (!y.empty()) y[0] = 1.0;
  return Frame::from_columns({gbtest::numeric_column("x", x),
                              gbtest::numeric_column("grp", group_values),
                              gbtest::target_column("y", y)});
}

// Appends `n` rows with one score/label to all three vectors.
void add_block(std::vector<double>& scores, std::vector<double>& labels,
               std::vector<double>& groups, double group, std::size_t n, double score,
               std::size_t positives) {
  for (std::size_t i = 0; i < n; ++i) {
    scores.push_back(score);
    labels.push_back(i < positives ? 1.0 : 0.0);
    groups.push_back(group);
  }
}

Frame rows_for(const std::vector<double>& groups) {
  std::vector<double> x(groups.size(), 0.0);
  std::vector<double> y(groups.size(), 0.0);
  y[0] = 1.0;
  return Frame::from_columns({gbtest::numeric_column("x", x),
                              gbtest::numeric_column("grp", groups),
                              gbtest::target_column("y", y)});
}

}  // namespace

TEST_CASE("disparity ratios come out exact on a round-number fixture") {
  // Protected: favorable 40/100; reference: favorable 50/100 -> AIR = 0.8.
  // False omission 5/40 vs 10/50 -> ratio 0.625.
  GroupCounts protected_counts{30, 30, 35, 5};
  GroupCounts reference_counts{25, 25, 40, 10};

  const DisparityReport report =
      disparity_metrics(protected_counts, reference_counts, 7, 0.5);
  REQUIRE(report.air.has_value());
  CHECK(*report.air == 0.8);
  REQUIRE(report.for_disparity.has_value());
  CHECK(*report.for_disparity == 0.625);
  CHECK(report.n_excluded == 7);
  CHECK(report.cutoff == 0.5);

  // 0.8 sits on the inclusive edge of the band; 0.625 is well below it.
  CHECK(report.air_flag == BandFlag::pass);
  CHECK(report.for_flag == BandFlag::fail);
}

TEST_CASE("four-fifths band edges are inclusive") {
  CHECK(four_fifths_flag(0.8) == BandFlag::pass);
  CHECK(four_fifths_flag(1.25) == BandFlag::pass);
  CHECK(four_fifths_flag(1.0) == BandFlag::pass);
  CHECK(four_fifths_flag(std::nextafter(0.8, 0.0)) == BandFlag::fail);
  CHECK(four_fifths_flag(std::nextafter(1.25, 2.0)) == BandFlag::fail);
  CHECK(four_fifths_flag(0.0) == BandFlag::fail);
  CHECK(four_fifths_flag(std::nullopt) == BandFlag::not_evaluable);
}

TEST_CASE("group counts expose favorable and false-omission rates") {
  GroupCounts counts{10, 20, 30, 40};  // tp fp tn fn
  CHECK(counts.size() == 100);
  CHECK(counts.favorable_rate() == 0.7);
  REQUIRE(counts.false_omission_rate().has_value());
  CHECK(*counts.false_omission_rate() == doctest::Approx(40.0 / 70.0).epsilon(1e-15));

  GroupCounts all_positive{5, 5, 0, 0};
  CHECK(all_positive.favorable_rate() == 0.0);
  CHECK(!all_positive.false_omission_rate().has_value());
}

TEST_CASE("undefined ratios surface as not evaluable") {
  // Nobody in the reference group is predicted negative: AIR has a zero
  // denominator and neither group supports a false-omission rate.
  GroupCounts protected_counts{1, 1, 1, 1};
  GroupCounts reference_counts{2, 2, 0, 0};
  const DisparityReport report =
      disparity_metrics(protected_counts, reference_counts, 0, 0.5);
  CHECK(!report.air.has_value());
  CHECK(report.air_flag == BandFlag::not_evaluable);
  CHECK(!report.for_disparity.has_value());
  CHECK(report.for_flag == BandFlag::not_evaluable);

  CHECK_THROWS_WITH_AS(disparity_metrics(GroupCounts{}, reference_counts, 0, 0.5),
                       doctest::Contains("protected group is empty"), DataError);
  CHECK_THROWS_WITH_AS(disparity_metrics(protected_counts, GroupCounts{}, 0, 0.5),
                       doctest::Contains("reference group is empty"), DataError);
}

TEST_CASE("row tagging matches numeric values and categorical levels") {
  SUBCASE("numeric equality with excluded leftovers") {
    const Frame f = group_frame({1, 2, 3, 2, 1});
    GroupSpec spec;
    spec.feature = "grp";
    spec.protected_values = {"2"};
    spec.reference_values = {"1"};
    const std::vector<GroupTag> tags = tag_rows(f, spec);
    const std::vector<GroupTag> expected = {
        GroupTag::reference_group, GroupTag::protected_group, GroupTag::excluded,
        GroupTag::protected_group, GroupTag::reference_group};
    CHECK(tags == expected);
  }
  SUBCASE("categorical token and numeric-level matching") {
    const Frame f = Frame::from_columns(
        {gbtest::numeric_column("x", {0, 0, 0}),
         gbtest::categorical_column("sex", {0, 1, 0}, {"2", "1"}, {2.0, 1.0}),
         gbtest::target_column("y", {1, 0, 0})});
    GroupSpec spec;
    spec.feature = "sex";
    spec.protected_values = {"2"};    // token match
    spec.reference_values = {"1.0"};  // numeric match against level value 1
    const std::vector<GroupTag> tags = tag_rows(f, spec);
    CHECK(tags[0] == GroupTag::protected_group);
    CHECK(tags[1] == GroupTag::reference_group);
    CHECK(tags[2] == GroupTag::protected_group);
  }
  SUBCASE("overlapping memberships are rejected") {
    const Frame f = group_frame({2, 1});
    GroupSpec spec;
    spec.feature = "grp";
    spec.protected_values = {"2"};
    spec.reference_values = {"2.0"};  // parses to the same number
    CHECK_THROWS_WITH_AS(tag_rows(f, spec), doctest::Contains("overlap"), InvalidArgument);
  }
  SUBCASE("validation") {
    const Frame f = group_frame({1, 2});
    GroupSpec spec;
    spec.feature = "grp";
    CHECK_THROWS_AS(tag_rows(f, spec), InvalidArgument);  // empty value lists
    spec.protected_values = {"2"};
    spec.reference_values = {"1"};
    spec.feature = "ghost";
    CHECK_THROWS_WITH_AS(tag_rows(f, spec), doctest::Contains("'ghost' is not in the data"),
                         InvalidArgument);
  }
}

TEST_CASE("confusion counting treats the cutoff as an inclusive positive") {
  const std::vector<double> scores = {0.5, 0.49, 0.5, 0.51};
  const std::vector<double> labels = {1, 1, 0, 0};
  const std::vector<GroupTag> tags(4, GroupTag::protected_group);
  const GroupCounts counts =
      confusion_counts(scores, labels, tags, GroupTag::protected_group, 0.5);
  CHECK(counts.tp == 1);  // 0.5 with label 1
  CHECK(counts.fn == 1);  // 0.49 with label 1
  CHECK(counts.fp == 2);  // 0.5 and 0.51 with label 0
  CHECK(counts.tn == 0);

  CHECK_THROWS_AS(confusion_counts(scores, std::vector<double>{1, 1, 0, 0.5}, tags,
                                   GroupTag::protected_group, 0.5),
                  InvalidArgument);
  CHECK_THROWS_AS(confusion_counts(std::vector<double>{0.5}, labels, tags,
                                   GroupTag::protected_group, 0.5),
                  InvalidArgument);
}

TEST_CASE("a full audit wires tagging, counting and ratios together") {
  std::vector<double> scores, labels, groups;
  // Protected group 2: favorable 40/100, false omission 5/40.
  add_block(scores, labels, groups, 2.0, 60, 0.9, 30);  // predicted positive
  add_block(scores, labels, groups, 2.0, 40, 0.1, 5);   // predicted negative
  // Reference group 1: favorable 50/100, false omission 10/50.
  add_block(scores, labels, groups, 1.0, 50, 0.9, 25);
  add_block(scores, labels, groups, 1.0, 50, 0.1, 10);
  // Stray rows outside both groups.
  add_block(scores, labels, groups, 7.0, 3, 0.9, 1);

  GroupSpec spec;
  spec.feature = "grp";
  spec.protected_values = {"2"};
  spec.reference_values = {"1"};
  spec.cutoff = 0.5;

  const DisparityReport report = audit_disparity(scores, labels, rows_for(groups), spec);
  CHECK(report.protected_counts.size() == 100);
  CHECK(report.reference_counts.size() == 100);
  CHECK(report.n_excluded == 3);
  CHECK(*report.air == 0.8);
  CHECK(*report.for_disparity == 0.625);
  CHECK(report.air_flag == BandFlag::pass);
  CHECK(report.for_flag == BandFlag::fail);

  CHECK_THROWS_AS(
      audit_disparity(std::vector<double>{0.5}, std::vector<double>{1}, rows_for(groups), spec),
      InvalidArgument);
}

TEST_CASE("remediation raises the cutoff just far enough") {
  std::vector<double> scores, labels, groups;
  // Protected: at 0.5 favorable 40/100 and false omission 0.125.
  add_block(scores, labels, groups, 2.0, 35, 0.3, 0);
  add_block(scores, labels, groups, 2.0, 5, 0.3, 5);
  add_block(scores, labels, groups, 2.0, 20, 0.58, 6);
  add_block(scores, labels, groups, 2.0, 40, 0.9, 40);
  // Reference: at 0.5 favorable 50/100 and false omission 0.2.
  add_block(scores, labels, groups, 1.0, 40, 0.3, 0);
  add_block(scores, labels, groups, 1.0, 10, 0.3, 10);
  add_block(scores, labels, groups, 1.0, 10, 0.58, 0);
  add_block(scores, labels, groups, 1.0, 40, 0.9, 40);

  GroupSpec spec;
  spec.feature = "grp";
  spec.protected_values = {"2"};
  spec.reference_values = {"1"};
  spec.cutoff = 0.5;

  const Frame rows = rows_for(groups);
  const RemediationResult res = remediate_cutoff(scores, labels, rows, spec);

  // Before: AIR passes on the 0.8 edge but the omission ratio fails.
  CHECK(*res.before.air == 0.8);
  CHECK(*res.before.for_disparity == 0.625);
  CHECK(res.before.for_flag == BandFlag::fail);

  // 0.55 changes nothing (no scores in between); 0.6 clears both ratios.
  REQUIRE(res.feasible);
  CHECK(res.remediated_cutoff == 0.6);
  CHECK(res.original_cutoff == 0.5);
  CHECK(res.note == "raised cutoff until all required ratios fall in band");
  CHECK(*res.after.air == 1.0);
  CHECK(*res.after.for_disparity == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(res.after.air_flag == BandFlag::pass);
  CHECK(res.after.for_flag == BandFlag::pass);
  CHECK(res.accuracy_before == doctest::Approx(161.0 / 200.0).epsilon(1e-12));
  CHECK(res.accuracy_after == doctest::Approx(179.0 / 200.0).epsilon(1e-12));
  CHECK(res.auc_value == auc(scores, labels));
}

TEST_CASE("remediation falls back to lowering the cutoff") {
  std::vector<double> scores, labels, groups;
  // Protected: 35 low scores, 65 high; the high block is mostly events.
  add_block(scores, labels, groups, 2.0, 35, 0.1, 7);
  add_block(scores, labels, groups, 2.0, 65, 0.9, 52);
  // Reference keeps a mid block at 0.45 that only a lower cutoff flips.
  add_block(scores, labels, groups, 1.0, 30, 0.1, 6);
  add_block(scores, labels, groups, 1.0, 20, 0.45, 4);
  add_block(scores, labels, groups, 1.0, 50, 0.9, 15);

  GroupSpec spec;
  spec.feature = "grp";
  spec.protected_values = {"2"};
  spec.reference_values = {"1"};
  spec.cutoff = 0.5;

  const RemediationResult res = remediate_cutoff(scores, labels, rows_for(groups), spec);
  // At 0.5 the favorable rates are 0.35 vs 0.5: AIR 0.7 fails, and every
  // higher cutoff either repeats the split or fails the omission ratio.
  CHECK(res.before.air_flag == BandFlag::fail);
  REQUIRE(res.feasible);
  CHECK(res.remediated_cutoff == 0.45);
  CHECK(res.note == "lowered cutoff until all required ratios fall in band");
  CHECK(*res.after.air == doctest::Approx(0.35 / 0.3).epsilon(1e-12));
  CHECK(res.after.for_flag == BandFlag::pass);
}

TEST_CASE("remediation reports the already-fair and infeasible cases") {
  SUBCASE("already within band") {
    std::vector<double> scores, labels, groups;
    add_block(scores, labels, groups, 2.0, 10, 0.9, 5);
    add_block(scores, labels, groups, 2.0, 10, 0.1, 2);
    add_block(scores, labels, groups, 1.0, 10, 0.9, 5);
    add_block(scores, labels, groups, 1.0, 10, 0.1, 2);
    GroupSpec spec;
    spec.feature = "grp";
    spec.protected_values = {"2"};
    spec.reference_values = {"1"};
    const RemediationResult res = remediate_cutoff(scores, labels, rows_for(groups), spec);
    REQUIRE(res.feasible);
    CHECK(res.remediated_cutoff == res.original_cutoff);
    CHECK(res.note == "already within band at the audited cutoff");
    CHECK(res.accuracy_after == res.accuracy_before);
  }
  SUBCASE("no cutoff works") {
    std::vector<double> scores, labels, groups;
    // Identical scores everywhere: below the cutoff both groups have no
    // favorable pool, above it the omission ratio is the raw rate gap (5x).
    add_block(scores, labels, groups, 2.0, 10, 0.5, 10);
    add_block(scores, labels, groups, 1.0, 10, 0.5, 2);
    GroupSpec spec;
    spec.feature = "grp";
    spec.protected_values = {"2"};
    spec.reference_values = {"1"};
    const RemediationResult res = remediate_cutoff(scores, labels, rows_for(groups), spec);
    CHECK(!res.feasible);
    CHECK(res.remediated_cutoff == res.original_cutoff);
    CHECK(res.note == "no cutoff on the scanned grid brings every required ratio in band");
    CHECK(res.accuracy_after == res.accuracy_before);
  }
  SUBCASE("options are validated") {
    std::vector<double> scores, labels, groups;
    add_block(scores, labels, groups, 2.0, 4, 0.9, 2);
    add_block(scores, labels, groups, 1.0, 4, 0.1, 2);
    GroupSpec spec;
    spec.feature = "grp";
    spec.protected_values = {"2"};
    spec.reference_values = {"1"};
    RemediationOptions options;
    options.step = 0.0;
    CHECK_THROWS_AS(remediate_cutoff(scores, labels, rows_for(groups), spec, options),
                    InvalidArgument);
    options.step = 0.05;
    options.require_air = false;
    options.require_for = false;
    CHECK_THROWS_AS(remediate_cutoff(scores, labels, rows_for(groups), spec, options),
                    InvalidArgument);
  }
}

TEST_CASE("a single required metric can drive remediation") {
  std::vector<double> scores, labels, groups;
  // False omission is hopeless (rates 10x apart) but AIR alone is fixable.
  add_block(scores, labels, groups, 2.0, 30, 0.3, 20);
  add_block(scores, labels, groups, 2.0, 70, 0.9, 60);
  add_block(scores, labels, groups, 1.0, 50, 0.3, 2);
  add_block(scores, labels, groups, 1.0, 50, 0.9, 10);
  GroupSpec spec;
  spec.feature = "grp";
  spec.protected_values = {"2"};
  spec.reference_values = {"1"};

  RemediationOptions air_only;
  air_only.require_for = false;
  const RemediationResult res =
      remediate_cutoff(scores, labels, rows_for(groups), spec, air_only);
  REQUIRE(res.feasible);
  CHECK(res.after.air_flag == BandFlag::pass);
}
