#include "glassbox/report.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "glassbox/debug.hpp"
#include "glassbox/errors.hpp"
#include "glassbox/export.hpp"
#include "glassbox/format.hpp"
#include "glassbox/gbm.hpp"
#include "glassbox/lime.hpp"
#include "glassbox/metrics.hpp"
#include "glassbox/model_io.hpp"
#include "glassbox/pdp.hpp"
#include "glassbox/shap.hpp"
#include "glassbox/surrogate.hpp"
#include "glassbox/tree.hpp"

namespace glassbox {

namespace {

std::string fixed6(double v) { return format_fixed(v, 6); }

std::string sanitize_name(const std::string& name) {
  std::string out = name;
  for (char& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
    if (!ok) c = '_';
  }
  return out;
}

void render_node(const TreeModel& model, int index, int depth, std::ostringstream& out) {
  const TreeNode& node = model.nodes[static_cast<std::size_t>(index)];
  for (int i = 0; i < depth; ++i) out << "|  ";
  if (node.is_leaf()) {
    out << "leaf value=" << format_double(node.value) << " cover="
        << format_double(node.cover) << "\n";
    return;
  }
  out << model.feature_names[static_cast<std::size_t>(node.feature)] << " < "
      << format_double(node.threshold) << " cover=" << format_double(node.cover) << "\n";
  render_node(model, node.left, depth + 1, out);
  render_node(model, node.right, depth + 1, out);
}

double positive_rate(const Frame& frame) {
  const std::vector<double> y = frame.target_values();
  double total = 0.0;
  for (double v : y) total += v;
  return total / static_cast<double>(y.size());
}

}  // namespace

std::string render_tree(const TreeModel& model) {
  if (model.nodes.empty()) return "(empty tree)\n";
  std::ostringstream out;
  render_node(model, 0, 0, out);
  return out.str();
}

ReportResult run_report(const Frame& data, const ReportConfig& cfg) {
  if (data.n_rows() < 4) throw InvalidArgument("report needs at least 4 rows");
  if (!data.target_index().has_value()) throw DataError("report needs a target column");

  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  ReportResult result;
  const auto emit = [&](const std::string& name, const std::string& content) {
    const std::string path = (fs::path(cfg.out_dir) / name).string();
    write_text_file(path, content);
    result.files.push_back(path);
    return name;
  };

  const auto [train_full, valid_full] = split(data, cfg.valid_fraction, cfg.seed);
  const Frame train = cfg.exclude.empty() ? train_full : drop_columns(train_full, cfg.exclude);
  const Frame valid = cfg.exclude.empty() ? valid_full : drop_columns(valid_full, cfg.exclude);
  const std::vector<double> valid_labels = valid.target_values();

  // Single decision tree, depth tuned on validation ranking quality.
  int best_depth = 0;
  double best_tree_auc = -1.0;
  TreeModel g_tree;
  for (int depth = 3; depth <= 6; ++depth) {
    TreeParams params;
    params.max_depth = depth;
    TreeModel candidate = train_tree(train, params);
    const double candidate_auc = auc(predict(candidate, valid), valid_labels);
    if (candidate_auc > best_tree_auc) {
      best_tree_auc = candidate_auc;
      best_depth = depth;
      g_tree = std::move(candidate);
    }
  }

  GbmParams gbm_params;
  gbm_params.n_rounds = cfg.n_rounds;
  gbm_params.learning_rate = cfg.learning_rate;
  gbm_params.max_depth = cfg.max_depth;
  gbm_params.l2 = cfg.l2;
  gbm_params.monotone = cfg.monotone;
  const GbmModel g_boost = train_gbm(train, gbm_params);

  const std::vector<double> tree_scores = predict(g_tree, valid);
  const std::vector<double> boost_scores = predict(g_boost, valid);
  const double tree_acc = accuracy(tree_scores, valid_labels, 0.5);
  const double boost_auc = auc(boost_scores, valid_labels);
  const double boost_acc = accuracy(boost_scores, valid_labels, 0.5);
  const double tree_ll = mean_log_loss(tree_scores, valid_labels);
  const double boost_ll = mean_log_loss(boost_scores, valid_labels);

  emit("model_tree.json", model_to_json(AnyModel(g_tree)));
  emit("model_gbm.json", model_to_json(AnyModel(g_boost)));

  // Global importance of the ensemble over the validation rows.
  const auto ranking = global_importance(g_boost, valid);
  emit("importance.csv", importance_csv(ranking));

  std::vector<std::string> pdp_features = cfg.pdp_features;
  if (pdp_features.empty()) {
    for (std::size_t i = 0; i < ranking.size() && i < 2; ++i) {
      pdp_features.push_back(ranking[i].first);
    }
  }

  struct PdpSection {
    CurveSet curves;
    std::vector<InteractionRegion> regions;
    std::string csv_name;
    std::string svg_name;
  };
  std::vector<PdpSection> pdp_sections;
  for (const std::string& feature : pdp_features) {
    PdpSection section;
    section.curves = pdp_ice(AnyModel(g_boost), valid, feature, cfg.grid_size);
    section.regions = section.curves.grid.size() >= 2
                          ? interaction_regions(section.curves, cfg.interaction_factor)
                          : std::vector<InteractionRegion>{};
    const std::string safe = sanitize_name(feature);
    section.csv_name = emit("pdp_ice_" + safe + ".csv", curves_csv(section.curves));
    section.svg_name = emit("pdp_ice_" + safe + ".svg", curves_svg(section.curves));
    pdp_sections.push_back(std::move(section));
  }

  const SurrogateFit surrogate = fit_surrogate_tree(AnyModel(g_boost), valid,
                                                    cfg.surrogate_depth);
  emit("surrogate_tree.json", model_to_json(AnyModel(surrogate.surrogate)));

  std::optional<LimeResult> lime;
  std::size_t segment_rows = 0;
  double segment_mean_score = 0.0;
  if (!cfg.segment.empty()) {
    const SegmentPredicate predicate = parse_predicate(cfg.segment);
    const Frame segment = filter_segment(valid, predicate);
    segment_rows = segment.n_rows();
    if (segment_rows == 0) {
      throw DataError("segment '" + predicate.text() + "' matches no validation rows");
    }
    std::vector<std::string> one_hot;
    for (const Column& c : segment.columns()) {
      if (c.role == Role::categorical &&
          std::find(g_boost.feature_names.begin(), g_boost.feature_names.end(), c.name) !=
              g_boost.feature_names.end()) {
        one_hot.push_back(c.name);
      }
    }
    lime = lime_segment(AnyModel(g_boost), segment, one_hot, cfg.lime_top_k);
    lime->segment_description = predicate.text();
    const Matrix sx = align_matrix(segment, g_boost.feature_names);
    for (std::size_t r = 0; r < sx.rows; ++r) segment_mean_score += g_boost.predict_row(sx.row(r));
    segment_mean_score /= static_cast<double>(sx.rows);
    emit("lime_segment.csv", lime_csv(*lime));
  }

  const ResidualReport residuals = residuals_by_group(AnyModel(g_boost), valid,
                                                      cfg.residual_group);
  emit("residuals.csv", residuals_csv(residuals));
  emit("residuals.svg", residuals_svg(residuals));
  if (!cfg.residual_group.empty()) {
    emit("residuals_by_" + sanitize_name(cfg.residual_group) + ".csv",
         residual_groups_csv(residuals));
  }

  std::optional<DisparityReport> audit;
  std::optional<RemediationResult> remediation;
  if (cfg.fairness.has_value()) {
    // The audit sees the un-dropped validation frame, so group columns that
    // the models never used are still available here.
    const Matrix ax = align_matrix(valid_full, g_boost.feature_names);
    std::vector<double> audit_scores(ax.rows);
    for (std::size_t r = 0; r < ax.rows; ++r) {
      audit_scores[r] = g_boost.predict_row(ax.row(r));
    }
    const std::vector<double> audit_labels = valid_full.target_values();
    audit = audit_disparity(audit_scores, audit_labels, valid_full, *cfg.fairness);
    emit("fairness_audit.json", fairness_json(*audit, *cfg.fairness));

    RemediationOptions options;
    options.step = cfg.remediation_step;
    remediation = remediate_cutoff(audit_scores, audit_labels, valid_full, *cfg.fairness,
                                   options);
    emit("remediation.json", remediation_json(*remediation, *cfg.fairness));
  }

  // ---- report.md ----
  std::ostringstream md;
  md << "# Model transparency report\n\n";
  md << "- data: " << (cfg.data_label.empty() ? "(unnamed)" : cfg.data_label) << " ("
     << data.n_rows() << " rows, " << data.n_cols() << " columns)\n";
  md << "- seed: " << cfg.seed << ", validation fraction: " << format_double(cfg.valid_fraction)
     << " (train " << train.n_rows() << ", validation " << valid.n_rows() << ")\n";
  md << "- positive rate: " << fixed6(positive_rate(data)) << " overall, "
     << fixed6(positive_rate(valid)) << " validation\n";
  if (!cfg.exclude.empty()) {
    md << "- excluded from model inputs:";
    for (const std::string& name : cfg.exclude) md << " " << name;
    md << "\n";
  }
  md << "\n## Models\n\n";
  md << "| model | validation AUC | validation accuracy | validation log-loss |\n";
  md << "|---|---|---|---|\n";
  md << "| decision tree (depth " << best_depth << ") | " << fixed6(best_tree_auc) << " | "
     << fixed6(tree_acc) << " | " << fixed6(tree_ll) << " |\n";
  md << "| boosted trees (" << cfg.n_rounds << " rounds, depth " << cfg.max_depth
     << ", lr " << format_double(cfg.learning_rate) << ") | " << fixed6(boost_auc) << " | "
     << fixed6(boost_acc) << " | " << fixed6(boost_ll) << " |\n";
  if (!cfg.monotone.empty()) {
    md << "\nmonotone constraints:";
    for (const auto& [name, dir] : cfg.monotone) {
      md << " " << name << (dir > 0 ? " (+1)" : dir < 0 ? " (-1)" : " (0)");
    }
    md << "\n";
  }

  md << "\n## Global importance (boosted model)\n\n";
  md << "Mean absolute Shapley contribution per feature over the validation rows,"
        " margin space.\n\n";
  md << "| rank | feature | mean abs phi |\n|---|---|---|\n";
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    md << "| " << (i + 1) << " | " << ranking[i].first << " | " << fixed6(ranking[i].second)
       << " |\n";
  }

  md << "\n## Partial dependence\n";
  for (const PdpSection& section : pdp_sections) {
    const CurveSet& curves = section.curves;
    md << "\n### " << curves.feature << "\n\n";
    md << "- grid: " << curves.grid.size() << " quantile points in ["
       << format_double(curves.grid.front()) << ", " << format_double(curves.grid.back())
       << "]\n";
    double max_div = 0.0;
    std::size_t max_at = 0;
    for (std::size_t j = 0; j < curves.divergence.size(); ++j) {
      if (curves.divergence[j] > max_div) {
        max_div = curves.divergence[j];
        max_at = j;
      }
    }
    md << "- max ICE divergence: " << fixed6(max_div) << " at " << curves.feature << " = "
       << format_double(curves.grid[max_at]) << "\n";
    if (section.regions.empty()) {
      md << "- interaction regions: none detected\n";
    } else {
      md << "- interaction regions (divergence > " << format_double(cfg.interaction_factor)
         << "x median):";
      for (const InteractionRegion& region : section.regions) {
        md << " [" << format_double(region.lo) << ", " << format_double(region.hi) << "]";
      }
      md << "\n";
    }
    md << "- artifacts: " << section.csv_name << ", " << section.svg_name << "\n";
  }

  md << "\n## Global surrogate\n\n";
  md << "Depth-" << cfg.surrogate_depth
     << " regression tree distilled from the boosted model's predicted probabilities"
        " (fit on half of the validation rows, scored on the other half).\n\n";
  md << "- fidelity R^2: " << fixed6(surrogate.fidelity_r2) << " (RMSE "
     << fixed6(surrogate.fidelity_rmse) << ") on " << surrogate.n_eval << " held-out rows\n\n";
  md << "```\n" << render_tree(surrogate.surrogate) << "```\n";

  if (lime.has_value()) {
    md << "\n## Segment explanation\n\n";
    md << "Sparse linear fit to the boosted model's probabilities over validation rows"
          " where " << lime->segment_description << " (" << segment_rows << " rows).\n\n";
    md << "- mean predicted probability in segment: " << fixed6(segment_mean_score) << "\n";
    md << "- intercept: " << fixed6(lime->intercept) << "\n";
    md << "- fit R^2: " << fixed6(lime->r_squared) << "\n\n";
    md << "| feature | coefficient |\n|---|---|\n";
    for (std::size_t i = 0; i < lime->model.feature_names.size(); ++i) {
      md << "| " << lime->model.feature_names[i] << " | "
         << fixed6(lime->model.coefficients[i]) << " |\n";
    }
  }

  md << "\n## Residual diagnostics\n\n";
  {
    double total = 0.0, total_abs = 0.0;
    double lo = residuals.residuals.front(), hi = residuals.residuals.front();
    for (double r : residuals.residuals) {
      total += r;
      total_abs += std::abs(r);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    const double n = static_cast<double>(residuals.residuals.size());
    md << "Signed binomial deviance residuals on the validation rows: mean "
       << fixed6(total / n) << ", mean abs " << fixed6(total_abs / n) << ", range ["
       << fixed6(lo) << ", " << fixed6(hi) << "].\n";
  }
  if (!residuals.groups.empty()) {
    md << "\n| " << residuals.group_feature
       << " | count | mean residual | mean abs residual |\n|---|---|---|---|\n";
    for (const GroupSummary& g : residuals.groups) {
      md << "| " << g.group_label << " | " << g.count << " | " << fixed6(g.mean_residual)
         << " | " << fixed6(g.mean_abs_residual) << " |\n";
    }
  }

  if (audit.has_value()) {
    const GroupSpec& spec = *cfg.fairness;
    md << "\n## Fairness audit\n\n";
    md << "Grouping on " << spec.feature << " (protected:";
    for (const std::string& v : spec.protected_values) md << " " << v;
    md << "; reference:";
    for (const std::string& v : spec.reference_values) md << " " << v;
    md << "), cutoff " << format_double(spec.cutoff)
       << "; favorable means predicted negative.\n\n";
    md << "| group | n | favorable rate | false omission rate |\n|---|---|---|---|\n";
    const auto group_row = [&](const char* label, const GroupCounts& counts) {
      md << "| " << label << " | " << counts.size() << " | "
         << fixed6(counts.favorable_rate()) << " | ";
      const auto fo = counts.false_omission_rate();
      md << (fo.has_value() ? fixed6(*fo) : std::string("n/a")) << " |\n";
    };
    group_row("protected", audit->protected_counts);
    group_row("reference", audit->reference_counts);
    const auto metric_line = [&](const char* label, const std::optional<double>& value,
                                 BandFlag flag) {
      md << "- " << label << ": "
         << (value.has_value() ? fixed6(*value) : std::string("not evaluable"));
      md << " -> " << (flag == BandFlag::pass ? "pass"
                       : flag == BandFlag::fail ? "fail" : "not evaluable")
         << " (band [0.8, 1.25])\n";
    };
    md << "\n";
    metric_line("adverse impact ratio", audit->air, audit->air_flag);
    metric_line("false omission disparity", audit->for_disparity, audit->for_flag);

    md << "\n## Remediation\n\n";
    if (remediation->feasible) {
      md << "- cutoff: " << format_double(remediation->original_cutoff) << " -> "
         << format_double(remediation->remediated_cutoff) << " (" << remediation->note
         << ")\n";
      md << "- accuracy: " << fixed6(remediation->accuracy_before) << " -> "
         << fixed6(remediation->accuracy_after) << "; AUC unchanged at "
         << fixed6(remediation->auc_value) << "\n";
      metric_line("adverse impact ratio after", remediation->after.air,
                  remediation->after.air_flag);
      metric_line("false omission disparity after", remediation->after.for_disparity,
                  remediation->after.for_flag);
    } else {
      md << "- " << remediation->note << "\n";
    }
  }

  md << "\n## Artifacts\n\n";
  for (const std::string& path : result.files) {
    md << "- " << fs::path(path).filename().string() << "\n";
  }

  emit("report.md", md.str());
  return result;
}

}  // namespace glassbox
