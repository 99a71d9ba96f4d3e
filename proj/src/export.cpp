#include "glassbox/export.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "glassbox/errors.hpp"
#include "glassbox/format.hpp"

namespace glassbox {

namespace {

using ordered_json = nlohmann::ordered_json;

const char* flag_name(BandFlag flag) {
  switch (flag) {
    case BandFlag::pass: return "pass";
    case BandFlag::fail: return "fail";
    default: return "not_evaluable";
  }
}

ordered_json group_json(const GroupCounts& counts) {
  ordered_json out;
  out["n"] = counts.size();
  out["tp"] = counts.tp;
  out["fp"] = counts.fp;
  out["tn"] = counts.tn;
  out["fn"] = counts.fn;
  out["favorable_rate"] = counts.favorable_rate();
  const auto fo = counts.false_omission_rate();
  if (fo.has_value()) {
    out["false_omission_rate"] = *fo;
  } else {
    out["false_omission_rate"] = nullptr;
  }
  return out;
}

ordered_json metric_json(const std::optional<double>& value, BandFlag flag) {
  ordered_json out;
  if (value.has_value()) {
    out["value"] = *value;
  } else {
    out["value"] = nullptr;
  }
  out["flag"] = flag_name(flag);
  return out;
}

ordered_json audit_json(const DisparityReport& report, const GroupSpec& spec) {
  ordered_json out;
  out["grouping"]["feature"] = spec.feature;
  out["grouping"]["protected"] = spec.protected_values;
  out["grouping"]["reference"] = spec.reference_values;
  out["cutoff"] = report.cutoff;
  out["n_excluded"] = report.n_excluded;
  out["groups"]["protected"] = group_json(report.protected_counts);
  out["groups"]["reference"] = group_json(report.reference_counts);
  out["metrics"]["adverse_impact_ratio"] = metric_json(report.air, report.air_flag);
  out["metrics"]["false_omission_disparity"] =
      metric_json(report.for_disparity, report.for_flag);
  out["band"]["lower"] = 0.8;
  out["band"]["upper"] = 1.25;
  return out;
}

// Pixel-space mapping for the fixed 640x400 SVG canvas.
struct Scale {
  double lo = 0.0;
  double hi = 1.0;
  double px_lo = 0.0;
  double px_hi = 1.0;

  double map(double v) const {
    if (hi == lo) return 0.5 * (px_lo + px_hi);
    return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo);
  }
};

std::string px(double v) { return format_fixed(v, 2); }

void svg_header(std::ostringstream& svg, const std::string& title) {
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
         "viewBox=\"0 0 640 400\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"640\" height=\"400\" fill=\"#ffffff\"/>\n";
  svg << "<rect x=\"50\" y=\"40\" width=\"540\" height=\"310\" fill=\"none\" "
         "stroke=\"#444444\" stroke-width=\"1\"/>\n";
  svg << "<text x=\"320\" y=\"20\" text-anchor=\"middle\" font-family=\"monospace\" "
         "font-size=\"14\">" << title << "</text>\n";
}

void svg_axis_labels(std::ostringstream& svg, const Scale& x, const Scale& y) {
  svg << "<text x=\"50\" y=\"368\" text-anchor=\"start\" font-family=\"monospace\" "
         "font-size=\"11\">" << format_double(x.lo) << "</text>\n";
  svg << "<text x=\"590\" y=\"368\" text-anchor=\"end\" font-family=\"monospace\" "
         "font-size=\"11\">" << format_double(x.hi) << "</text>\n";
  svg << "<text x=\"46\" y=\"353\" text-anchor=\"end\" font-family=\"monospace\" "
         "font-size=\"11\">" << format_double(y.lo) << "</text>\n";
  svg << "<text x=\"46\" y=\"48\" text-anchor=\"end\" font-family=\"monospace\" "
         "font-size=\"11\">" << format_double(y.hi) << "</text>\n";
}

}  // namespace

std::string attribution_csv(const Attribution& attribution,
                            std::span<const double> row_values) {
  std::ostringstream out;
  out << "# space=" << (attribution.space == OutputSpace::margin ? "margin" : "probability")
      << " base_value=" << format_double(attribution.base_value)
      << " output=" << format_double(attribution.output) << "\n";
  out << "feature,value,phi\n";
  for (std::size_t i = 0; i < attribution.features.size(); ++i) {
    out << attribution.features[i] << ','
        << (i < row_values.size() ? format_double(row_values[i]) : std::string()) << ','
        << format_double(attribution.phi[i]) << "\n";
  }
  return out.str();
}

std::string importance_csv(const std::vector<std::pair<std::string, double>>& ranking) {
  std::ostringstream out;
  out << "rank,feature,mean_abs_phi\n";
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    out << (i + 1) << ',' << ranking[i].first << ',' << format_double(ranking[i].second)
        << "\n";
  }
  return out.str();
}

std::string curves_csv(const CurveSet& curves, std::size_t max_ice) {
  const std::size_t n_ice = std::min(max_ice, curves.ice.size());
  std::ostringstream out;
  out << "grid,pdp,divergence";
  for (std::size_t r = 0; r < n_ice; ++r) out << ",ice_" << r;
  out << "\n";
  for (std::size_t j = 0; j < curves.grid.size(); ++j) {
    out << format_double(curves.grid[j]) << ',' << format_double(curves.pdp[j]) << ','
        << format_double(curves.divergence[j]);
    for (std::size_t r = 0; r < n_ice; ++r) out << ',' << format_double(curves.ice[r][j]);
    out << "\n";
  }
  return out.str();
}

std::string residuals_csv(const ResidualReport& report) {
  const bool grouped = !report.group_feature.empty();
  std::ostringstream out;
  out << "row,prediction,label,residual";
  if (grouped) out << ',' << report.group_feature;
  out << "\n";
  for (std::size_t r = 0; r < report.residuals.size(); ++r) {
    out << r << ',' << format_double(report.predictions[r]) << ','
        << format_double(report.labels[r]) << ',' << format_double(report.residuals[r]);
    if (grouped) out << ',' << format_double(report.group_values[r]);
    out << "\n";
  }
  return out.str();
}

std::string residual_groups_csv(const ResidualReport& report) {
  std::ostringstream out;
  out << report.group_feature
      << ",count,mean_residual,mean_abs_residual,min_residual,max_residual\n";
  for (const GroupSummary& g : report.groups) {
    out << g.group_label << ',' << g.count << ',' << format_double(g.mean_residual) << ','
        << format_double(g.mean_abs_residual) << ',' << format_double(g.min_residual)
        << ',' << format_double(g.max_residual) << "\n";
  }
  return out.str();
}

std::string lime_csv(const LimeResult& result) {
  std::ostringstream out;
  out << "# mode=" << (result.mode == LimeMode::segment ? "segment" : "perturbation");
  if (!result.segment_description.empty()) {
    out << " segment=\"" << result.segment_description << "\"";
  }
  if (result.mode == LimeMode::perturbation) {
    out << " kernel_width=" << format_double(result.kernel_width);
  }
  out << " intercept=" << format_double(result.intercept)
      << " r_squared=" << format_double(result.r_squared)
      << " n_samples=" << result.n_samples << "\n";
  out << "feature,coefficient\n";
  for (std::size_t i = 0; i < result.model.feature_names.size(); ++i) {
    out << result.model.feature_names[i] << ','
        << format_double(result.model.coefficients[i]) << "\n";
  }
  return out.str();
}

std::string fairness_json(const DisparityReport& report, const GroupSpec& spec) {
  return audit_json(report, spec).dump(2) + "\n";
}

std::string remediation_json(const RemediationResult& result, const GroupSpec& spec) {
  ordered_json out;
  out["grouping"]["feature"] = spec.feature;
  out["grouping"]["protected"] = spec.protected_values;
  out["grouping"]["reference"] = spec.reference_values;
  out["feasible"] = result.feasible;
  out["original_cutoff"] = result.original_cutoff;
  out["remediated_cutoff"] = result.remediated_cutoff;
  out["note"] = result.note;
  out["accuracy"]["before"] = result.accuracy_before;
  out["accuracy"]["after"] = result.accuracy_after;
  out["auc"] = result.auc_value;
  out["before"] = audit_json(result.before, spec);
  out["after"] = audit_json(result.after, spec);
  return out.dump(2) + "\n";
}

std::string curves_svg(const CurveSet& curves, std::size_t max_ice) {
  Scale x{curves.grid.front(), curves.grid.back(), 50.0, 590.0};

  double lo = curves.pdp.front();
  double hi = lo;
  const std::size_t n_ice = std::min(max_ice, curves.ice.size());
  for (double v : curves.pdp) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (std::size_t r = 0; r < n_ice; ++r) {
    for (double v : curves.ice[r]) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  Scale y{lo, hi, 350.0, 40.0};

  std::ostringstream svg;
  svg_header(svg, "partial dependence: " + curves.feature);
  for (std::size_t r = 0; r < n_ice; ++r) {
    svg << "<polyline fill=\"none\" stroke=\"#c8c8c8\" stroke-width=\"1\" points=\"";
    for (std::size_t j = 0; j < curves.grid.size(); ++j) {
      if (j != 0) svg << ' ';
      svg << px(x.map(curves.grid[j])) << ',' << px(y.map(curves.ice[r][j]));
    }
    svg << "\"/>\n";
  }
  svg << "<polyline fill=\"none\" stroke=\"#1f6f43\" stroke-width=\"2.5\" points=\"";
  for (std::size_t j = 0; j < curves.grid.size(); ++j) {
    if (j != 0) svg << ' ';
    svg << px(x.map(curves.grid[j])) << ',' << px(y.map(curves.pdp[j]));
  }
  svg << "\"/>\n";
  svg_axis_labels(svg, x, y);
  svg << "</svg>\n";
  return svg.str();
}

std::string residuals_svg(const ResidualReport& report) {
  const bool grouped = !report.group_feature.empty();
  const std::size_t n = report.residuals.size();
  const std::size_t n_points = std::min<std::size_t>(n, 2000);

  double x_lo = 0.0, x_hi = 1.0;
  if (grouped) {
    x_lo = *std::min_element(report.group_values.begin(), report.group_values.end());
    x_hi = *std::max_element(report.group_values.begin(), report.group_values.end());
  } else {
    x_lo = 0.0;
    x_hi = static_cast<double>(n_points == 0 ? 1 : n_points - 1);
  }
  double y_lo = 0.0, y_hi = 0.0;
  for (std::size_t r = 0; r < n_points; ++r) {
    y_lo = std::min(y_lo, report.residuals[r]);
    y_hi = std::max(y_hi, report.residuals[r]);
  }
  if (y_lo == y_hi) {
    y_lo -= 1.0;
    y_hi += 1.0;
  }

  Scale x{x_lo, x_hi, 50.0, 590.0};
  Scale y{y_lo, y_hi, 350.0, 40.0};

  std::ostringstream svg;
  svg_header(svg, grouped ? "deviance residuals by " + report.group_feature
                          : "deviance residuals");
  svg << "<line x1=\"50\" y1=\"" << px(y.map(0.0)) << "\" x2=\"590\" y2=\""
      << px(y.map(0.0)) << "\" stroke=\"#999999\" stroke-width=\"1\" "
      << "stroke-dasharray=\"4 3\"/>\n";
  for (std::size_t r = 0; r < n_points; ++r) {
    const double residual = report.residuals[r];
    const double gx = grouped ? report.group_values[r] : static_cast<double>(r);
    const char* color = residual > 0.0 ? "#b03a2e" : (residual < 0.0 ? "#2e6fb0" : "#888888");
    svg << "<circle cx=\"" << px(x.map(gx)) << "\" cy=\"" << px(y.map(residual))
        << "\" r=\"2\" fill=\"" << color << "\" fill-opacity=\"0.55\"/>\n";
  }
  svg_axis_labels(svg, x, y);
  svg << "</svg>\n";
  return svg.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw DataError("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace glassbox
