#include "glassbox/frame.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "glassbox/errors.hpp"
#include "glassbox/format.hpp"
#include "glassbox/random.hpp"

namespace glassbox {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

bool parse_number(const std::string& token, double& out) {
  const std::string t = trim(token);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (*first == '+') ++first;  // from_chars rejects an explicit plus
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

}  // namespace

bool Column::levels_numeric() const {
  for (double v : level_values) {
    if (std::isnan(v)) return false;
  }
  return true;
}

Frame Frame::from_columns(std::vector<Column> cols) {
  Frame f;
  if (cols.empty()) return f;
  const std::size_t n = cols.front().values.size();
  int targets = 0;
  for (const auto& c : cols) {
    if (c.values.size() != n) {
      throw DataError("column '" + c.name + "' has " + std::to_string(c.values.size()) +
                      " rows, expected " + std::to_string(n));
    }
    if (c.role == Role::target) {
      ++targets;
      for (double v : c.values) {
        if (v != 0.0 && v != 1.0) {
          throw DataError("target column '" + c.name + "' has a value outside {0,1}");
        }
      }
    }
    if (c.role == Role::categorical) {
      if (c.levels.size() != c.level_values.size()) {
        throw DataError("column '" + c.name + "': level dictionary size mismatch");
      }
      for (double v : c.values) {
        if (v < 0.0 || v >= static_cast<double>(c.levels.size()) || v != std::floor(v)) {
          throw DataError("column '" + c.name + "': categorical code out of range");
        }
      }
    }
  }
  if (targets > 1) throw DataError("more than one target column declared");
  f.cols_ = std::move(cols);
  f.n_rows_ = n;
  return f;
}

const Column& Frame::column(const std::string& name) const {
  const int i = column_index(name);
  if (i < 0) throw DataError("unknown column '" + name + "'");
  return cols_[static_cast<std::size_t>(i)];
}

int Frame::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < cols_.size(); ++i) {
    if (cols_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::optional<std::size_t> Frame::target_index() const {
  for (std::size_t i = 0; i < cols_.size(); ++i) {
    if (cols_[i].role == Role::target) return i;
  }
  return std::nullopt;
}

double Frame::ordinal_at(std::size_t col, std::size_t row) const {
  const Column& c = cols_.at(col);
  const double v = c.values[row];
  if (c.role != Role::categorical) return v;
  const double lv = c.level_values[static_cast<std::size_t>(v)];
  if (std::isnan(lv)) {
    throw DataError("column '" + c.name + "': level '" +
                    c.levels[static_cast<std::size_t>(v)] +
                    "' is not numeric, no ordinal view");
  }
  return lv;
}

std::vector<double> Frame::ordinal_column(const std::string& name) const {
  const int i = column_index(name);
  if (i < 0) throw DataError("unknown column '" + name + "'");
  std::vector<double> out(n_rows_);
  for (std::size_t r = 0; r < n_rows_; ++r) out[r] = ordinal_at(static_cast<std::size_t>(i), r);
  return out;
}

std::vector<double> Frame::target_values() const {
  const auto t = target_index();
  if (!t) throw DataError("frame has no target column");
  return cols_[*t].values;
}

Frame Frame::take_rows(std::span<const std::size_t> rows) const {
  std::vector<Column> out = cols_;
  for (auto& c : out) {
    std::vector<double> v;
    v.reserve(rows.size());
    for (std::size_t r : rows) v.push_back(c.values[r]);
    c.values = std::move(v);
  }
  return Frame::from_columns(std::move(out));
}

Frame load_csv(const std::string& path, const Schema& schema) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw DataError("file '" + path + "' is empty");
  const std::vector<std::string> header = split_line(line);

  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i].empty()) throw DataError(path + ": empty header name in column " + std::to_string(i + 1));
    if (!index.emplace(header[i], i).second) {
      throw DataError(path + ": duplicate header name '" + header[i] + "'");
    }
  }
  if (!schema.target.empty() && !index.count(schema.target)) {
    throw DataError(path + ": declared target '" + schema.target + "' not in header");
  }
  for (const auto& c : schema.categorical) {
    if (!index.count(c)) throw DataError(path + ": declared categorical '" + c + "' not in header");
  }

  std::vector<Column> cols(header.size());
  std::vector<std::unordered_map<std::string, std::size_t>> code_of(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) {
    cols[i].name = header[i];
    cols[i].role = Role::numeric;
    if (header[i] == schema.target) cols[i].role = Role::target;
  }
  for (const auto& c : schema.categorical) {
    auto& col = cols[index[c]];
    if (col.role == Role::target) throw DataError(path + ": column '" + c + "' is both target and categorical");
    col.role = Role::categorical;
  }

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != header.size()) {
      throw DataError(path + ": line " + std::to_string(line_no) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(header.size()));
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::string& cell = cells[i];
      Column& col = cols[i];
      if (cell.empty()) {
        throw DataError(path + ": missing value at line " + std::to_string(line_no) +
                        ", column '" + col.name + "'");
      }
      if (col.role == Role::categorical) {
        auto [it, inserted] = code_of[i].emplace(cell, col.levels.size());
        if (inserted) {
          col.levels.push_back(cell);
          double v = kNaN;
          parse_number(cell, v);
          col.level_values.push_back(v);
        }
        col.values.push_back(static_cast<double>(it->second));
      } else {
        double v;
        if (!parse_number(cell, v)) {
          throw DataError(path + ": cannot parse '" + cell + "' as a number at line " +
                          std::to_string(line_no) + ", column '" + col.name + "'");
        }
        if (col.role == Role::target && v != 0.0 && v != 1.0) {
          throw DataError(path + ": target value '" + cell + "' outside {0,1} at line " +
                          std::to_string(line_no));
        }
        col.values.push_back(v);
      }
    }
  }
  return Frame::from_columns(std::move(cols));
}

void save_csv(const Frame& frame, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file '" + path + "'");
  for (std::size_t i = 0; i < frame.n_cols(); ++i) {
    if (i) out << ',';
    out << frame.column(i).name;
  }
  out << '\n';
  for (std::size_t r = 0; r < frame.n_rows(); ++r) {
    for (std::size_t i = 0; i < frame.n_cols(); ++i) {
      if (i) out << ',';
      const Column& c = frame.column(i);
      if (c.role == Role::categorical) {
        out << c.levels[static_cast<std::size_t>(c.values[r])];
      } else {
        out << format_double(c.values[r]);
      }
    }
    out << '\n';
  }
  if (!out) throw DataError("write failure on '" + path + "'");
}

int synthetic_truth(std::span<const double> features, double threshold) {
  const double s = features[0] * features[3] + std::abs(features[7]) * features[8] * features[8];
  return s >= threshold ? 1 : 0;
}

Frame generate_synthetic(const SyntheticConfig& cfg) {
  if (cfg.noise_rate < 0.0 || cfg.noise_rate > 1.0) {
    throw InvalidArgument("noise_rate must be in [0,1]");
  }
  if (!std::isfinite(cfg.threshold)) throw InvalidArgument("threshold must be finite");
  if (cfg.n_features < 9) throw InvalidArgument("n_features must be >= 9");

  std::vector<Column> cols(cfg.n_features + 1);
  for (std::size_t j = 0; j < cfg.n_features; ++j) {
    cols[j].name = "X_num" + std::to_string(j + 1);
    cols[j].role = Role::numeric;
    cols[j].values.reserve(cfg.n_rows);
  }
  cols[cfg.n_features].name = "label";
  cols[cfg.n_features].role = Role::target;
  cols[cfg.n_features].values.reserve(cfg.n_rows);

  Rng rng(cfg.seed);
  std::vector<double> row(cfg.n_features);
  for (std::size_t r = 0; r < cfg.n_rows; ++r) {
    for (std::size_t j = 0; j < cfg.n_features; ++j) {
      row[j] = rng.normal();
      cols[j].values.push_back(row[j]);
    }
    int label = synthetic_truth(row, cfg.threshold);
    if (rng.bernoulli(cfg.noise_rate)) label = 1 - label;
    cols[cfg.n_features].values.push_back(static_cast<double>(label));
  }
  return Frame::from_columns(std::move(cols));
}

std::pair<Frame, Frame> split(const Frame& frame, double valid_fraction, std::uint64_t seed) {
  if (frame.n_rows() == 0) throw DataError("cannot split an empty frame");
  if (!(valid_fraction > 0.0 && valid_fraction < 1.0)) {
    throw InvalidArgument("valid_fraction must be in (0,1)");
  }
  const std::size_t n = frame.n_rows();
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  Rng rng(seed);
  rng.shuffle(idx);

  const auto train_n =
      static_cast<std::size_t>(std::llround(static_cast<double>(n) * (1.0 - valid_fraction)));
  std::span<const std::size_t> all(idx);
  return {frame.take_rows(all.subspan(0, train_n)), frame.take_rows(all.subspan(train_n))};
}

Frame one_hot_encode(const Frame& frame, const std::vector<std::string>& columns) {
  for (const auto& name : columns) {
    const Column& c = frame.column(name);  // throws on unknown column
    if (c.role != Role::categorical) {
      throw DataError("column '" + name + "' is not categorical");
    }
  }

  std::vector<Column> out;
  for (const Column& c : frame.columns()) {
    const bool encode = std::find(columns.begin(), columns.end(), c.name) != columns.end();
    if (!encode) {
      out.push_back(c);
      continue;
    }
    // Levels observed in this frame, ordered numerically when possible.
    std::vector<std::size_t> observed;
    {
      std::vector<bool> seen(c.levels.size(), false);
      for (double v : c.values) seen[static_cast<std::size_t>(v)] = true;
      for (std::size_t l = 0; l < seen.size(); ++l) {
        if (seen[l]) observed.push_back(l);
      }
    }
    const bool numeric = c.levels_numeric();
    std::sort(observed.begin(), observed.end(), [&](std::size_t a, std::size_t b) {
      if (numeric) return c.level_values[a] < c.level_values[b];
      return c.levels[a] < c.levels[b];
    });
    for (std::size_t l : observed) {
      Column ind;
      ind.name = c.name + " == " + c.levels[l];
      ind.role = Role::numeric;
      ind.values.reserve(c.values.size());
      for (double v : c.values) {
        ind.values.push_back(static_cast<std::size_t>(v) == l ? 1.0 : 0.0);
      }
      out.push_back(std::move(ind));
    }
  }
  return Frame::from_columns(std::move(out));
}

bool SegmentPredicate::eval(double x) const {
  if (op == ">") return x > value;
  if (op == ">=") return x >= value;
  if (op == "<") return x < value;
  if (op == "<=") return x <= value;
  if (op == "==") return x == value;
  throw InvalidArgument("unknown operator '" + op + "'");
}

std::string SegmentPredicate::text() const {
  return column + " " + op + " " + format_double(value);
}

SegmentPredicate parse_predicate(const std::string& text) {
  // IDENT OP NUMBER with optional whitespace.
  static const char* ops[] = {">=", "<=", "==", ">", "<"};
  for (const char* op : ops) {
    const std::size_t pos = text.find(op);
    if (pos == std::string::npos) continue;
    SegmentPredicate p;
    p.column = trim(text.substr(0, pos));
    p.op = op;
    const std::string rhs = trim(text.substr(pos + std::string(op).size()));
    if (p.column.empty() || rhs.empty() || !parse_number(rhs, p.value)) {
      throw DataError("cannot parse predicate '" + text + "'");
    }
    return p;
  }
  throw DataError("cannot parse predicate '" + text + "' (expected one of > >= < <= ==)");
}

Frame filter_segment(const Frame& frame, const SegmentPredicate& pred) {
  const int ci = frame.column_index(pred.column);
  if (ci < 0) throw DataError("predicate references unknown column '" + pred.column + "'");
  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < frame.n_rows(); ++r) {
    if (pred.eval(frame.ordinal_at(static_cast<std::size_t>(ci), r))) keep.push_back(r);
  }
  return frame.take_rows(keep);
}

Frame filter_segment(const Frame& frame, const std::string& predicate) {
  return filter_segment(frame, parse_predicate(predicate));
}

Frame drop_columns(const Frame& frame, const std::vector<std::string>& names) {
  for (const std::string& name : names) {
    if (!frame.has_column(name)) {
      throw DataError("cannot drop unknown column '" + name + "'");
    }
  }
  std::vector<Column> kept;
  for (std::size_t i = 0; i < frame.n_cols(); ++i) {
    const Column& c = frame.column(i);
    if (std::find(names.begin(), names.end(), c.name) == names.end()) kept.push_back(c);
  }
  return Frame::from_columns(std::move(kept));
}

Matrix design_matrix(const Frame& frame, const std::vector<std::string>& exclude) {
  Matrix m;
  for (std::size_t i = 0; i < frame.n_cols(); ++i) {
    const Column& c = frame.column(i);
    if (c.role == Role::target) continue;
    if (std::find(exclude.begin(), exclude.end(), c.name) != exclude.end()) continue;
    m.names.push_back(c.name);
  }
  return align_matrix(frame, m.names);
}

Matrix align_matrix(const Frame& frame, const std::vector<std::string>& names) {
  Matrix m;
  m.names = names;
  m.rows = frame.n_rows();
  m.cols = names.size();
  m.data.resize(m.rows * m.cols);
  for (std::size_t j = 0; j < names.size(); ++j) {
    const int ci = frame.column_index(names[j]);
    if (ci < 0) {
      throw ModelError("schema mismatch: column '" + names[j] + "' missing from data");
    }
    for (std::size_t r = 0; r < m.rows; ++r) {
      m.data[r * m.cols + j] = frame.ordinal_at(static_cast<std::size_t>(ci), r);
    }
  }
  return m;
}

}  // namespace glassbox
