#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace glassbox {

enum class Role { numeric, categorical, target };

// One column of a Frame. Numeric and target columns store raw values;
// categorical columns store level codes (dense in [0, n_levels)) plus the
// original level tokens and, when every token parses as a number, the
// parsed per-level values used by the ordinal view.
struct Column {
  std::string name;
  Role role = Role::numeric;
  std::vector<double> values;
  std::vector<std::string> levels;
  std::vector<double> level_values;  // NaN entries mark non-numeric tokens

  bool levels_numeric() const;
};

// Immutable columnar dataset. Construct via the factory functions below or
// Frame::from_columns; all operations return new frames.
class Frame {
 public:
  Frame() = default;
  static Frame from_columns(std::vector<Column> cols);

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return cols_.size(); }
  const std::vector<Column>& columns() const { return cols_; }
  const Column& column(std::size_t i) const { return cols_.at(i); }
  const Column& column(const std::string& name) const;
  int column_index(const std::string& name) const;  // -1 when absent
  bool has_column(const std::string& name) const { return column_index(name) >= 0; }
  std::optional<std::size_t> target_index() const;

  // Ordinal view of one cell: numeric/target columns give the stored value,
  // categorical columns give the parsed numeric value of the row's level.
  // Throws DataError for categorical columns with non-numeric levels.
  double ordinal_at(std::size_t col, std::size_t row) const;
  std::vector<double> ordinal_column(const std::string& name) const;

  std::vector<double> target_values() const;  // throws when no target declared

  Frame take_rows(std::span<const std::size_t> rows) const;

 private:
  std::vector<Column> cols_;
  std::size_t n_rows_ = 0;
};

// Declared column roles for CSV loading. Columns not named are numeric.
struct Schema {
  std::string target;  // empty = no target column
  std::vector<std::string> categorical;
};

struct SyntheticConfig {
  std::size_t n_rows = 0;
  std::size_t n_features = 9;
  std::uint64_t seed = 0;
  double noise_rate = 0.15;
  double threshold = 0.42;
};

// Comma-separated, first row header, UTF-8, no quoting. Categorical levels
// are coded by first appearance; unparseable numeric cells are errors that
// name the offending file line and column.
Frame load_csv(const std::string& path, const Schema& schema);

void save_csv(const Frame& frame, const std::string& path);

// Draws X_num1..X_num{n_features} i.i.d. standard normal from the seeded
// generator, labels each row 1 iff
//   X_num1*X_num4 + |X_num8|*X_num9^2 >= threshold
// and then flips each label independently with probability noise_rate.
// Per row the draw order is the features in column order followed by one
// uniform for the flip, so a seed pins the whole frame.
Frame generate_synthetic(const SyntheticConfig& cfg);

// Noiseless label rule behind generate_synthetic, exposed for tests.
int synthetic_truth(std::span<const double> features, double threshold);

// Seeded shuffle split into (train, valid) with sizes
// round(n*(1-valid_fraction)) and the remainder.
std::pair<Frame, Frame> split(const Frame& frame, double valid_fraction, std::uint64_t seed);

// Replaces each named categorical column with one 0/1 indicator column per
// level observed in this frame, named "COL == level"; level order is numeric
// when all tokens parse, else lexicographic.
Frame one_hot_encode(const Frame& frame, const std::vector<std::string>& columns);

// Single-column comparison predicate, e.g. "PAY_0 > 1".
struct SegmentPredicate {
  std::string column;
  std::string op;  // one of > >= < <= ==
  double value = 0.0;

  bool eval(double x) const;
  std::string text() const;
};

SegmentPredicate parse_predicate(const std::string& text);

// Rows satisfying the predicate, order preserved. An empty result is valid.
Frame filter_segment(const Frame& frame, const std::string& predicate);
Frame filter_segment(const Frame& frame, const SegmentPredicate& pred);

// Frame without the named columns; every name must exist.
Frame drop_columns(const Frame& frame, const std::vector<std::string>& names);

// Dense row-major matrix of ordinal feature values plus column names;
// the bridge between frames and model training/scoring.
struct Matrix {
  std::vector<std::string> names;
  std::vector<double> data;
  std::size_t rows = 0;
  std::size_t cols = 0;

  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<const double> row(std::size_t r) const {
    return {data.data() + r * cols, cols};
  }
};

// All non-target columns as ordinal values, minus `exclude`.
Matrix design_matrix(const Frame& frame, const std::vector<std::string>& exclude = {});

// Columns in the exact order of `names`; throws ModelError when a column is
// missing (scoring-schema mismatch).
Matrix align_matrix(const Frame& frame, const std::vector<std::string>& names);

}  // namespace glassbox
