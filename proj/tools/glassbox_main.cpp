// glassbox: train small interpretable models on tabular CSV data, explain
// them (Shapley attributions, partial dependence, surrogates, local linear
// fits), debug residuals, audit group fairness, and emit a combined report.
//
// Exit codes: 0 success, 1 expected failure (bad data, bad model file,
// invalid argument), 2 command-line usage error.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "glassbox/credit_sim.hpp"
#include "glassbox/debug.hpp"
#include "glassbox/errors.hpp"
#include "glassbox/export.hpp"
#include "glassbox/fairness.hpp"
#include "glassbox/format.hpp"
#include "glassbox/frame.hpp"
#include "glassbox/gbm.hpp"
#include "glassbox/lime.hpp"
#include "glassbox/linear.hpp"
#include "glassbox/metrics.hpp"
#include "glassbox/model_io.hpp"
#include "glassbox/pdp.hpp"
#include "glassbox/report.hpp"
#include "glassbox/shap.hpp"
#include "glassbox/surrogate.hpp"
#include "glassbox/tree.hpp"

namespace {

namespace fs = std::filesystem;
using namespace glassbox;

struct DataOpts {
  std::string path;
  std::string target;
  std::vector<std::string> categorical;
};

void add_data_options(CLI::App* cmd, DataOpts& opts, bool target_required) {
  cmd->add_option("--data", opts.path, "input CSV file")->required();
  auto* target = cmd->add_option("--target", opts.target, "name of the 0/1 target column");
  if (target_required) target->required();
  cmd->add_option("--categorical", opts.categorical,
                  "comma-separated categorical column names")
      ->delimiter(',');
}

Frame load_data(const DataOpts& opts) {
  Schema schema;
  schema.target = opts.target;
  schema.categorical = opts.categorical;
  return load_csv(opts.path, schema);
}

std::map<std::string, int> parse_monotone(const std::vector<std::string>& entries) {
  std::map<std::string, int> out;
  for (const std::string& entry : entries) {
    const auto colon = entry.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 >= entry.size()) {
      throw InvalidArgument("monotone entry '" + entry + "' is not NAME:+1 or NAME:-1");
    }
    const std::string name = entry.substr(0, colon);
    const std::string dir = entry.substr(colon + 1);
    if (dir == "+1" || dir == "1") out[name] = 1;
    else if (dir == "-1") out[name] = -1;
    else if (dir == "0") out[name] = 0;
    else throw InvalidArgument("monotone direction '" + dir + "' must be +1, -1 or 0");
  }
  return out;
}

double parse_number(const std::string& text, const std::string& what) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (!text.empty() && text.front() == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw InvalidArgument("cannot parse '" + text + "' as a number for " + what);
  }
  return value;
}

std::string out_path(const std::string& out_dir, const std::string& name) {
  fs::create_directories(out_dir);
  return (fs::path(out_dir) / name).string();
}

void print_metrics(const std::string& label, const std::vector<double>& scores,
                   const std::vector<double>& labels, double cutoff) {
  std::cout << label << ": auc=" << format_fixed(auc(scores, labels), 6)
            << " accuracy=" << format_fixed(accuracy(scores, labels, cutoff), 6)
            << " log_loss=" << format_fixed(mean_log_loss(scores, labels), 6) << "\n";
}

// ---- gen-data ----

struct GenDataArgs {
  std::size_t rows = 0;
  std::uint64_t seed = 42;
  std::string out;
  std::string style = "eq1";
  std::size_t features = 9;
  double noise_rate = 0.15;
  double threshold = 0.42;
};

void run_gen_data(const GenDataArgs& args) {
  Frame frame;
  if (args.style == "eq1") {
    SyntheticConfig cfg;
    cfg.n_rows = args.rows;
    cfg.n_features = args.features;
    cfg.seed = args.seed;
    cfg.noise_rate = args.noise_rate;
    cfg.threshold = args.threshold;
    frame = generate_synthetic(cfg);
  } else if (args.style == "credit-sim") {
    frame = generate_credit_portfolio(args.rows, args.seed);
  } else {
    throw InvalidArgument("unknown style '" + args.style + "' (use eq1 or credit-sim)");
  }
  save_csv(frame, args.out);
  std::cout << "wrote " << frame.n_rows() << " rows x " << frame.n_cols()
            << " columns to " << args.out << "\n";
}

// ---- train ----

struct TrainArgs {
  DataOpts data;
  std::vector<std::string> exclude;
  double valid_fraction = 0.25;
  std::uint64_t seed = 42;
  double cutoff = 0.5;
  std::string out;
  std::string save_train;
  std::string save_valid;
  // tree
  int max_depth = 4;
  int min_leaf = 1;
  bool tune_depth = false;
  // gbm
  int rounds = 100;
  double learning_rate = 0.1;
  double l2 = 1.0;
  std::vector<std::string> monotone;
};

void run_train(const TrainArgs& args, bool boosted) {
  const Frame data = load_data(args.data);

  Frame train = data;
  Frame valid;
  const bool have_valid = args.valid_fraction > 0.0;
  if (have_valid) {
    auto parts = split(data, args.valid_fraction, args.seed);
    train = std::move(parts.first);
    valid = std::move(parts.second);
  }

  // Excluded columns are hidden from the model but kept in the saved splits
  // so they stay available for audits.
  const Frame train_input = args.exclude.empty() ? train : drop_columns(train, args.exclude);

  AnyModel model;
  if (boosted) {
    GbmParams params;
    params.n_rounds = args.rounds;
    params.learning_rate = args.learning_rate;
    params.max_depth = args.max_depth;
    params.min_samples_leaf = args.min_leaf;
    params.l2 = args.l2;
    params.monotone = parse_monotone(args.monotone);
    model = train_gbm(train_input, params);
    std::cout << "trained boosted ensemble: " << args.rounds << " rounds, depth "
              << args.max_depth << ", lr " << format_double(args.learning_rate) << "\n";
  } else if (args.tune_depth && have_valid) {
    const std::vector<double> valid_labels = valid.target_values();
    int best_depth = 0;
    double best_auc = -1.0;
    TreeModel best;
    for (int depth = 3; depth <= 6; ++depth) {
      TreeParams params;
      params.max_depth = depth;
      params.min_samples_leaf = args.min_leaf;
      TreeModel candidate = train_tree(train_input, params);
      const double candidate_auc = auc(predict(candidate, valid), valid_labels);
      if (candidate_auc > best_auc) {
        best_auc = candidate_auc;
        best_depth = depth;
        best = std::move(candidate);
      }
    }
    model = std::move(best);
    std::cout << "trained decision tree: depth " << best_depth
              << " chosen from 3..6 by validation auc\n";
  } else {
    TreeParams params;
    params.max_depth = args.max_depth;
    params.min_samples_leaf = args.min_leaf;
    model = train_tree(train_input, params);
    std::cout << "trained decision tree: depth " << args.max_depth << "\n";
  }

  print_metrics("train", predict_proba(model, train), train.target_values(), args.cutoff);
  if (have_valid) {
    print_metrics("valid", predict_proba(model, valid), valid.target_values(), args.cutoff);
  }

  save_model(model, args.out);
  std::cout << "model saved to " << args.out << "\n";
  if (!args.save_train.empty()) save_csv(train, args.save_train);
  if (!args.save_valid.empty()) save_csv(valid, args.save_valid);
}

// ---- explain ----

struct ExplainArgs {
  DataOpts data;
  std::string model_path;
  std::string out_dir = ".";
  std::int64_t row = 0;
  std::string feature;
  int grid = 20;
  double factor = 2.0;
  int depth = 4;
  std::string segment;
  int top_k = 7;
  double l2 = 1e-6;
  std::size_t samples = 500;
  double kernel_width = 0.75;
  std::uint64_t seed = 7;
  bool oracle = false;
};

void require_row(const Frame& frame, std::int64_t row) {
  if (row < 0 || static_cast<std::size_t>(row) >= frame.n_rows()) {
    throw InvalidArgument("row " + std::to_string(row) + " out of range (0.." +
                          std::to_string(frame.n_rows() - 1) + ")");
  }
}

void run_explain_shap(const ExplainArgs& args) {
  const AnyModel model = load_model(args.model_path);
  const Frame data = load_data(args.data);
  require_row(data, args.row);
  const Matrix x = align_matrix(data, model_features(model));
  const auto row = x.row(static_cast<std::size_t>(args.row));

  Attribution attr;
  if (const auto* tree = std::get_if<TreeModel>(&model)) {
    attr = args.oracle ? shapley_brute_oracle(*tree, row) : tree_shap_local(*tree, row);
  } else if (const auto* gbm = std::get_if<GbmModel>(&model)) {
    attr = args.oracle ? shapley_brute_oracle(*gbm, row) : tree_shap_local(*gbm, row);
  } else {
    throw InvalidArgument("attribution needs a tree-based model");
  }

  const std::string path = out_path(args.out_dir, "attributions.csv");
  write_text_file(path, attribution_csv(attr, row));

  std::cout << "row " << args.row << " ("
            << (attr.space == OutputSpace::margin ? "margin" : "probability")
            << " space): base=" << format_fixed(attr.base_value, 6)
            << " output=" << format_fixed(attr.output, 6) << "\n";
  std::vector<std::size_t> order(attr.phi.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(attr.phi[a]) > std::abs(attr.phi[b]);
  });
  const std::size_t shown = std::min<std::size_t>(order.size(), 10);
  for (std::size_t k = 0; k < shown; ++k) {
    const std::size_t i = order[k];
    std::cout << "  " << attr.features[i] << " = " << format_double(row[i])
              << ": phi=" << format_fixed(attr.phi[i], 6) << "\n";
  }
  std::cout << "attributions written to " << path << "\n";
}

void run_explain_importance(const ExplainArgs& args) {
  const AnyModel model = load_model(args.model_path);
  const Frame data = load_data(args.data);

  std::vector<std::pair<std::string, double>> ranking;
  if (const auto* tree = std::get_if<TreeModel>(&model)) {
    ranking = global_importance(*tree, data);
  } else if (const auto* gbm = std::get_if<GbmModel>(&model)) {
    ranking = global_importance(*gbm, data);
  } else {
    throw InvalidArgument("importance needs a tree-based model");
  }

  const std::string path = out_path(args.out_dir, "importance.csv");
  write_text_file(path, importance_csv(ranking));
  const std::size_t shown = std::min<std::size_t>(ranking.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    std::cout << (i + 1) << ". " << ranking[i].first << " "
              << format_fixed(ranking[i].second, 6) << "\n";
  }
  std::cout << "importance written to " << path << "\n";
}

void run_explain_pdp(const ExplainArgs& args) {
  const AnyModel model = load_model(args.model_path);
  const Frame data = load_data(args.data);
  const CurveSet curves = pdp_ice(model, data, args.feature, args.grid);

  std::string safe = args.feature;
  for (char& c : safe) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
    if (!ok) c = '_';
  }
  const std::string csv_path = out_path(args.out_dir, "pdp_ice_" + safe + ".csv");
  const std::string svg_path = out_path(args.out_dir, "pdp_ice_" + safe + ".svg");
  write_text_file(csv_path, curves_csv(curves));
  write_text_file(svg_path, curves_svg(curves));

  std::cout << "pdp/ice for " << args.feature << ": " << curves.grid.size()
            << " grid points\n";
  if (curves.grid.size() >= 2) {
    const auto regions = interaction_regions(curves, args.factor);
    if (regions.empty()) {
      std::cout << "interaction regions: none detected\n";
    } else {
      for (const InteractionRegion& region : regions) {
        std::cout << "interaction region: [" << format_double(region.lo) << ", "
                  << format_double(region.hi) << "]\n";
      }
    }
  }
  std::cout << "curves written to " << csv_path << " and " << svg_path << "\n";
}

void run_explain_surrogate(const ExplainArgs& args) {
  const AnyModel model = load_model(args.model_path);
  const Frame data = load_data(args.data);
  const SurrogateFit fit = fit_surrogate_tree(model, data, args.depth);

  const std::string path = out_path(args.out_dir, "surrogate_tree.json");
  save_model(AnyModel(fit.surrogate), path);
  std::cout << "surrogate (depth " << args.depth << ") of " << fit.reference_kind
            << " model: fidelity r2=" << format_fixed(fit.fidelity_r2, 6)
            << " rmse=" << format_fixed(fit.fidelity_rmse, 6) << " on " << fit.n_eval
            << " held-out rows\n";
  std::cout << render_tree(fit.surrogate);
  std::cout << "surrogate written to " << path << "\n";
}

void run_explain_lime_segment(const ExplainArgs& args) {
  const AnyModel model = load_model(args.model_path);
  const Frame data = load_data(args.data);
  const SegmentPredicate predicate = parse_predicate(args.segment);
  const Frame segment = filter_segment(data, predicate);
  if (segment.n_rows() == 0) {
    throw DataError("segment '" + predicate.text() + "' matches no rows");
  }

  std::vector<std::string> one_hot;
  const auto& names = model_features(model);
  for (const Column& c : segment.columns()) {
    if (c.role == Role::categorical &&
        std::find(names.begin(), names.end(), c.name) != names.end()) {
      one_hot.push_back(c.name);
    }
  }
  LimeResult result = lime_segment(model, segment, one_hot, args.top_k, args.l2);
  result.segment_description = predicate.text();

  const std::string path = out_path(args.out_dir, "lime_segment.csv");
  write_text_file(path, lime_csv(result));
  std::cout << "segment " << predicate.text() << ": " << segment.n_rows() << " rows\n";
  std::cout << "intercept=" << format_fixed(result.intercept, 6)
            << " r2=" << format_fixed(result.r_squared, 6) << "\n";
  for (std::size_t i = 0; i < result.model.feature_names.size(); ++i) {
    std::cout << "  " << result.model.feature_names[i] << ": "
              << format_fixed(result.model.coefficients[i], 6) << "\n";
  }
  std::cout << "coefficients written to " << path << "\n";
}

void run_explain_lime_perturb(const ExplainArgs& args) {
  const AnyModel model = load_model(args.model_path);
  const Frame data = load_data(args.data);
  require_row(data, args.row);

  const LimeResult result =
      lime_perturb(model, data, static_cast<std::size_t>(args.row), args.samples,
                   args.kernel_width, args.top_k, args.seed, args.l2);
  const std::string path = out_path(args.out_dir, "lime_perturb.csv");
  write_text_file(path, lime_csv(result));
  std::cout << "local fit around row " << args.row << " (" << args.samples
            << " samples, kernel width " << format_double(args.kernel_width) << ")\n";
  std::cout << "intercept=" << format_fixed(result.intercept, 6)
            << " r2=" << format_fixed(result.r_squared, 6) << "\n";
  for (std::size_t i = 0; i < result.model.feature_names.size(); ++i) {
    std::cout << "  " << result.model.feature_names[i] << ": "
              << format_fixed(result.model.coefficients[i], 6) << "\n";
  }
  std::cout << "coefficients written to " << path << "\n";
}

// ---- debug ----

struct DebugArgs {
  DataOpts data;
  std::string model_path;
  std::string out_dir = ".";
  std::string group_by;
  std::int64_t row = 0;
  std::vector<std::string> edits;
  bool explain = false;
};

void run_debug_residuals(const DebugArgs& args) {
  const AnyModel model = load_model(args.model_path);
  const Frame data = load_data(args.data);
  const ResidualReport report = residuals_by_group(model, data, args.group_by);

  const std::string csv_path = out_path(args.out_dir, "residuals.csv");
  const std::string svg_path = out_path(args.out_dir, "residuals.svg");
  write_text_file(csv_path, residuals_csv(report));
  write_text_file(svg_path, residuals_svg(report));

  double total = 0.0, total_abs = 0.0;
  for (double r : report.residuals) {
    total += r;
    total_abs += std::abs(r);
  }
  const double n = static_cast<double>(report.residuals.size());
  std::cout << "residuals over " << report.residuals.size()
            << " rows: mean=" << format_fixed(total / n, 6)
            << " mean_abs=" << format_fixed(total_abs / n, 6) << "\n";

  if (!args.group_by.empty()) {
    std::string safe = args.group_by;
    for (char& c : safe) {
      const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
      if (!ok) c = '_';
    }
    const std::string group_path = out_path(args.out_dir, "residuals_by_" + safe + ".csv");
    write_text_file(group_path, residual_groups_csv(report));
    for (const GroupSummary& g : report.groups) {
      std::cout << "  " << args.group_by << "=" << g.group_label << ": n=" << g.count
                << " mean=" << format_fixed(g.mean_residual, 6)
                << " mean_abs=" << format_fixed(g.mean_abs_residual, 6) << "\n";
    }
    std::cout << "group summary written to " << group_path << "\n";
  }
  std::cout << "residuals written to " << csv_path << " and " << svg_path << "\n";
}

void run_debug_what_if(const DebugArgs& args) {
  const AnyModel model = load_model(args.model_path);
  const Frame data = load_data(args.data);
  require_row(data, args.row);

  std::map<std::string, double> edits;
  for (const std::string& entry : args.edits) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= entry.size()) {
      throw InvalidArgument("edit '" + entry + "' is not NAME=VALUE");
    }
    edits[entry.substr(0, eq)] = parse_number(entry.substr(eq + 1), "edit '" + entry + "'");
  }

  const WhatIfResult result =
      what_if(model, data, static_cast<std::size_t>(args.row), edits, args.explain);
  std::cout << "row " << args.row << ": output " << format_fixed(result.original_output, 6)
            << " -> " << format_fixed(result.edited_output, 6)
            << " (delta " << format_fixed(result.delta, 6) << ")\n";
  for (const auto& [name, value] : edits) {
    const std::size_t i = static_cast<std::size_t>(
        std::find(result.features.begin(), result.features.end(), name) -
        result.features.begin());
    std::cout << "  " << name << ": " << format_double(result.original_row[i]) << " -> "
              << format_double(value) << "\n";
  }
  if (result.original_attribution.has_value()) {
    const Attribution& before = *result.original_attribution;
    const Attribution& after = *result.edited_attribution;
    std::cout << "attribution deltas ("
              << (before.space == OutputSpace::margin ? "margin" : "probability")
              << " space):\n";
    for (std::size_t i = 0; i < before.features.size(); ++i) {
      const double delta = after.phi[i] - before.phi[i];
      if (delta == 0.0) continue;
      std::cout << "  " << before.features[i] << ": "
                << format_fixed(before.phi[i], 6) << " -> " << format_fixed(after.phi[i], 6)
                << "\n";
    }
  }
}

// ---- fairness ----

struct FairnessArgs {
  DataOpts data;
  std::string model_path;
  std::string out_dir = ".";
  GroupSpec spec;
  double step = 0.05;
  std::vector<std::string> metrics = {"air", "for"};
};

const char* flag_text(BandFlag flag) {
  switch (flag) {
    case BandFlag::pass: return "pass";
    case BandFlag::fail: return "fail";
    default: return "not evaluable";
  }
}

void print_audit(const DisparityReport& report) {
  const auto line = [](const char* label, const GroupCounts& counts) {
    std::cout << "  " << label << ": n=" << counts.size()
              << " favorable_rate=" << format_fixed(counts.favorable_rate(), 6);
    const auto fo = counts.false_omission_rate();
    std::cout << " false_omission_rate="
              << (fo.has_value() ? format_fixed(*fo, 6) : std::string("n/a")) << "\n";
  };
  line("protected", report.protected_counts);
  line("reference", report.reference_counts);
  std::cout << "  excluded rows: " << report.n_excluded << "\n";
  std::cout << "  adverse_impact_ratio="
            << (report.air.has_value() ? format_fixed(*report.air, 6)
                                       : std::string("n/a"))
            << " [" << flag_text(report.air_flag) << "]\n";
  std::cout << "  false_omission_disparity="
            << (report.for_disparity.has_value() ? format_fixed(*report.for_disparity, 6)
                                                 : std::string("n/a"))
            << " [" << flag_text(report.for_flag) << "]\n";
}

std::pair<std::vector<double>, std::vector<double>> scores_and_labels(
    const AnyModel& model, const Frame& data) {
  const Matrix x = align_matrix(data, model_features(model));
  std::vector<double> scores(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) scores[r] = predict_proba(model, x.row(r));
  return {std::move(scores), data.target_values()};
}

void run_fairness_audit(const FairnessArgs& args) {
  const AnyModel model = load_model(args.model_path);
  const Frame data = load_data(args.data);
  const auto [scores, labels] = scores_and_labels(model, data);
  const DisparityReport report = audit_disparity(scores, labels, data, args.spec);

  const std::string path = out_path(args.out_dir, "fairness_audit.json");
  write_text_file(path, fairness_json(report, args.spec));
  std::cout << "audit of " << args.spec.feature << " at cutoff "
            << format_double(args.spec.cutoff) << ":\n";
  print_audit(report);
  std::cout << "audit written to " << path << "\n";
}

void run_fairness_remediate(const FairnessArgs& args) {
  const AnyModel model = load_model(args.model_path);
  const Frame data = load_data(args.data);
  const auto [scores, labels] = scores_and_labels(model, data);

  RemediationOptions options;
  options.step = args.step;
  options.require_air = false;
  options.require_for = false;
  for (const std::string& metric : args.metrics) {
    if (metric == "air") options.require_air = true;
    else if (metric == "for") options.require_for = true;
    else throw InvalidArgument("unknown metric '" + metric + "' (use air, for)");
  }

  const RemediationResult result =
      remediate_cutoff(scores, labels, data, args.spec, options);
  const std::string path = out_path(args.out_dir, "remediation.json");
  write_text_file(path, remediation_json(result, args.spec));

  std::cout << "before (cutoff " << format_double(result.original_cutoff) << "):\n";
  print_audit(result.before);
  if (result.feasible) {
    std::cout << "after (cutoff " << format_double(result.remediated_cutoff) << "):\n";
    print_audit(result.after);
    std::cout << "accuracy " << format_fixed(result.accuracy_before, 6) << " -> "
              << format_fixed(result.accuracy_after, 6) << ", auc unchanged at "
              << format_fixed(result.auc_value, 6) << "\n";
  }
  std::cout << result.note << "\n";
  std::cout << "remediation written to " << path << "\n";
}

// ---- report ----

struct ReportArgs {
  DataOpts data;
  ReportConfig cfg;
  std::vector<std::string> monotone;
  std::string fairness_feature;
  std::vector<std::string> protected_values;
  std::vector<std::string> reference_values;
  double cutoff = 0.5;
};

void run_report_cmd(const ReportArgs& args) {
  const Frame data = load_data(args.data);
  ReportConfig cfg = args.cfg;
  cfg.data_label = args.data.path;
  cfg.monotone = parse_monotone(args.monotone);
  if (!args.fairness_feature.empty()) {
    GroupSpec spec;
    spec.feature = args.fairness_feature;
    spec.protected_values = args.protected_values;
    spec.reference_values = args.reference_values;
    spec.cutoff = args.cutoff;
    cfg.fairness = spec;
  }
  const ReportResult result = run_report(data, cfg);
  for (const std::string& file : result.files) std::cout << "wrote " << file << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"train, explain, debug and audit interpretable tabular models"};
  app.require_subcommand(1);

  // gen-data
  GenDataArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen-data", "generate a synthetic CSV dataset");
  gen->add_option("--rows", gen_args.rows, "number of rows")->required();
  gen->add_option("--seed", gen_args.seed, "generator seed");
  gen->add_option("--out", gen_args.out, "output CSV path")->required();
  gen->add_option("--style", gen_args.style, "eq1 (numeric interaction rule) or credit-sim");
  gen->add_option("--features", gen_args.features, "feature count (eq1 style)");
  gen->add_option("--noise-rate", gen_args.noise_rate, "label flip probability (eq1 style)");
  gen->add_option("--threshold", gen_args.threshold, "label rule threshold (eq1 style)");
  gen->callback([&] { run_gen_data(gen_args); });

  // train
  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "train a model on a CSV dataset");
  train->require_subcommand(1);
  const auto add_train_common = [&](CLI::App* cmd) {
    add_data_options(cmd, train_args.data, true);
    cmd->add_option("--exclude", train_args.exclude, "columns hidden from the model")
        ->delimiter(',');
    cmd->add_option("--valid-fraction", train_args.valid_fraction,
                    "held-out fraction (0 disables)");
    cmd->add_option("--seed", train_args.seed, "split seed");
    cmd->add_option("--cutoff", train_args.cutoff, "accuracy cutoff for metrics");
    cmd->add_option("--out", train_args.out, "model JSON path")->required();
    cmd->add_option("--save-train", train_args.save_train, "write the training split here");
    cmd->add_option("--save-valid", train_args.save_valid, "write the validation split here");
  };
  CLI::App* train_tree_cmd = train->add_subcommand("tree", "single decision tree");
  add_train_common(train_tree_cmd);
  train_tree_cmd->add_option("--max-depth", train_args.max_depth, "tree depth");
  train_tree_cmd->add_option("--min-leaf", train_args.min_leaf, "minimum rows per leaf");
  train_tree_cmd->add_flag("--tune-depth", train_args.tune_depth,
                           "choose depth 3..6 by validation auc");
  train_tree_cmd->callback([&] { run_train(train_args, false); });
  CLI::App* train_gbm_cmd = train->add_subcommand("gbm", "boosted tree ensemble");
  add_train_common(train_gbm_cmd);
  train_gbm_cmd->add_option("--rounds", train_args.rounds, "boosting rounds");
  train_gbm_cmd->add_option("--learning-rate", train_args.learning_rate, "shrinkage");
  train_gbm_cmd->add_option("--max-depth", train_args.max_depth, "tree depth");
  train_gbm_cmd->add_option("--min-leaf", train_args.min_leaf, "minimum rows per leaf");
  train_gbm_cmd->add_option("--l2", train_args.l2, "leaf L2 regularization");
  train_gbm_cmd->add_option("--monotone", train_args.monotone,
                            "monotone constraints NAME:+1 or NAME:-1")
      ->delimiter(',');
  train_gbm_cmd->callback([&] { run_train(train_args, true); });

  // explain
  ExplainArgs explain_args;
  CLI::App* explain = app.add_subcommand("explain", "explain a trained model");
  explain->require_subcommand(1);
  const auto add_explain_common = [&](CLI::App* cmd, bool need_target) {
    add_data_options(cmd, explain_args.data, need_target);
    cmd->add_option("--model", explain_args.model_path, "model JSON path")->required();
    cmd->add_option("--out-dir", explain_args.out_dir, "artifact directory");
  };
  CLI::App* shap_cmd = explain->add_subcommand("shap", "per-row Shapley attribution");
  add_explain_common(shap_cmd, false);
  shap_cmd->add_option("--row", explain_args.row, "row index")->required();
  shap_cmd->add_flag("--oracle", explain_args.oracle,
                     "use exact subset enumeration (<= 15 features)");
  shap_cmd->callback([&] { run_explain_shap(explain_args); });
  CLI::App* importance_cmd =
      explain->add_subcommand("importance", "mean |phi| feature ranking");
  add_explain_common(importance_cmd, false);
  importance_cmd->callback([&] { run_explain_importance(explain_args); });
  CLI::App* pdp_cmd = explain->add_subcommand("pdp", "partial dependence and ICE curves");
  add_explain_common(pdp_cmd, false);
  pdp_cmd->add_option("--feature", explain_args.feature, "feature to sweep")->required();
  pdp_cmd->add_option("--grid", explain_args.grid, "grid size");
  pdp_cmd->add_option("--factor", explain_args.factor, "interaction detection factor");
  pdp_cmd->callback([&] { run_explain_pdp(explain_args); });
  CLI::App* surrogate_cmd =
      explain->add_subcommand("surrogate", "global surrogate tree");
  add_explain_common(surrogate_cmd, false);
  surrogate_cmd->add_option("--depth", explain_args.depth, "surrogate depth");
  surrogate_cmd->callback([&] { run_explain_surrogate(explain_args); });
  CLI::App* lime_seg_cmd =
      explain->add_subcommand("lime-segment", "linear fit over a data segment");
  add_explain_common(lime_seg_cmd, false);
  lime_seg_cmd->add_option("--segment", explain_args.segment, "predicate, e.g. 'PAY_0 > 1'")
      ->required();
  lime_seg_cmd->add_option("--top-k", explain_args.top_k, "coefficients kept");
  lime_seg_cmd->add_option("--l2", explain_args.l2, "ridge strength");
  lime_seg_cmd->callback([&] { run_explain_lime_segment(explain_args); });
  CLI::App* lime_pert_cmd =
      explain->add_subcommand("lime-perturb", "linear fit around one row");
  add_explain_common(lime_pert_cmd, false);
  lime_pert_cmd->add_option("--row", explain_args.row, "anchor row index")->required();
  lime_pert_cmd->add_option("--samples", explain_args.samples, "perturbation samples");
  lime_pert_cmd->add_option("--kernel-width", explain_args.kernel_width,
                            "distance kernel width");
  lime_pert_cmd->add_option("--top-k", explain_args.top_k, "coefficients kept");
  lime_pert_cmd->add_option("--l2", explain_args.l2, "ridge strength");
  lime_pert_cmd->add_option("--seed", explain_args.seed, "perturbation seed");
  lime_pert_cmd->callback([&] { run_explain_lime_perturb(explain_args); });

  // debug
  DebugArgs debug_args;
  CLI::App* debug = app.add_subcommand("debug", "inspect model errors");
  debug->require_subcommand(1);
  CLI::App* residuals_cmd =
      debug->add_subcommand("residuals", "deviance residuals, optionally grouped");
  add_data_options(residuals_cmd, debug_args.data, true);
  residuals_cmd->add_option("--model", debug_args.model_path, "model JSON path")->required();
  residuals_cmd->add_option("--out-dir", debug_args.out_dir, "artifact directory");
  residuals_cmd->add_option("--group-by", debug_args.group_by, "grouping feature");
  residuals_cmd->callback([&] { run_debug_residuals(debug_args); });
  CLI::App* what_if_cmd = debug->add_subcommand("what-if", "re-score a row with edits");
  add_data_options(what_if_cmd, debug_args.data, false);
  what_if_cmd->add_option("--model", debug_args.model_path, "model JSON path")->required();
  what_if_cmd->add_option("--row", debug_args.row, "row index")->required();
  what_if_cmd->add_option("--set", debug_args.edits, "edit NAME=VALUE (repeatable)")
      ->required();
  what_if_cmd->add_flag("--explain", debug_args.explain, "attribute both versions");
  what_if_cmd->callback([&] { run_debug_what_if(debug_args); });

  // fairness
  FairnessArgs fairness_args;
  CLI::App* fairness = app.add_subcommand("fairness", "group disparity audit");
  fairness->require_subcommand(1);
  const auto add_fairness_common = [&](CLI::App* cmd) {
    add_data_options(cmd, fairness_args.data, true);
    cmd->add_option("--model", fairness_args.model_path, "model JSON path")->required();
    cmd->add_option("--out-dir", fairness_args.out_dir, "artifact directory");
    cmd->add_option("--group-feature", fairness_args.spec.feature, "grouping column")
        ->required();
    cmd->add_option("--protected", fairness_args.spec.protected_values,
                    "protected group values")
        ->required()
        ->delimiter(',');
    cmd->add_option("--reference", fairness_args.spec.reference_values,
                    "reference group values")
        ->required()
        ->delimiter(',');
    cmd->add_option("--cutoff", fairness_args.spec.cutoff, "decision cutoff");
  };
  CLI::App* audit_cmd = fairness->add_subcommand("audit", "adverse impact audit");
  add_fairness_common(audit_cmd);
  audit_cmd->callback([&] { run_fairness_audit(fairness_args); });
  CLI::App* remediate_cmd =
      fairness->add_subcommand("remediate", "scan cutoffs until ratios pass");
  add_fairness_common(remediate_cmd);
  remediate_cmd->add_option("--step", fairness_args.step, "cutoff scan step");
  remediate_cmd->add_option("--metrics", fairness_args.metrics,
                            "ratios to satisfy: air, for")
      ->delimiter(',');
  remediate_cmd->callback([&] { run_fairness_remediate(fairness_args); });

  // report
  ReportArgs report_args;
  CLI::App* report = app.add_subcommand("report", "end-to-end transparency report");
  add_data_options(report, report_args.data, true);
  report->add_option("--out-dir", report_args.cfg.out_dir, "artifact directory")->required();
  report->add_option("--seed", report_args.cfg.seed, "split seed");
  report->add_option("--valid-fraction", report_args.cfg.valid_fraction, "held-out fraction");
  report->add_option("--rounds", report_args.cfg.n_rounds, "boosting rounds");
  report->add_option("--learning-rate", report_args.cfg.learning_rate, "shrinkage");
  report->add_option("--max-depth", report_args.cfg.max_depth, "boosted tree depth");
  report->add_option("--l2", report_args.cfg.l2, "leaf L2 regularization");
  report->add_option("--monotone", report_args.monotone,
                     "monotone constraints NAME:+1 or NAME:-1")
      ->delimiter(',');
  report->add_option("--exclude", report_args.cfg.exclude, "columns hidden from the model")
      ->delimiter(',');
  report->add_option("--pdp-features", report_args.cfg.pdp_features,
                     "features for dependence plots (default: top 2 by importance)")
      ->delimiter(',');
  report->add_option("--grid", report_args.cfg.grid_size, "dependence grid size");
  report->add_option("--factor", report_args.cfg.interaction_factor,
                     "interaction detection factor");
  report->add_option("--surrogate-depth", report_args.cfg.surrogate_depth, "surrogate depth");
  report->add_option("--segment", report_args.cfg.segment, "segment predicate to explain");
  report->add_option("--top-k", report_args.cfg.lime_top_k, "segment coefficients kept");
  report->add_option("--group-by", report_args.cfg.residual_group,
                     "residual grouping feature");
  report->add_option("--fairness-feature", report_args.fairness_feature, "audit column");
  report->add_option("--protected", report_args.protected_values, "protected group values")
      ->delimiter(',');
  report->add_option("--reference", report_args.reference_values, "reference group values")
      ->delimiter(',');
  report->add_option("--cutoff", report_args.cutoff, "audit decision cutoff");
  report->add_option("--step", report_args.cfg.remediation_step, "remediation scan step");
  report->callback([&] { run_report_cmd(report_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 1;
  } catch (const ModelError& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return 1;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
