#pragma once

#include <string>
#include <utility>
#include <vector>

#include "glassbox/frame.hpp"

namespace gbtest {

inline glassbox::Column numeric_column(std::string name, std::vector<double> values) {
  glassbox::Column c;
  c.name = std::move(name);
  c.role = glassbox::Role::numeric;
  c.values = std::move(values);
  return c;
}

inline glassbox::Column target_column(std::string name, std::vector<double> values) {
  glassbox::Column c;
  c.name = std::move(name);
  c.role = glassbox::Role::target;
  c.values = std::move(values);
  return c;
}

inline glassbox::Column categorical_column(std::string name, std::vector<double> codes,
                                           std::vector<std::string> levels,
                                           std::vector<double> level_values) {
  glassbox::Column c;
  c.name = std::move(name);
  c.role = glassbox::Role::categorical;
  c.values = std::move(codes);
  c.levels = std::move(levels);
  c.level_values = std::move(level_values);
  return c;
}

// Feature columns x0..x{p-1} plus target y.
inline glassbox::Frame frame_from(const std::vector<std::vector<double>>& x,
                                  const std::vector<double>& y) {
  std::vector<glassbox::Column> cols;
  for (std::size_t j = 0; j < x.size(); ++j) {
    cols.push_back(numeric_column("x" + std::to_string(j), x[j]));
  }
  cols.push_back(target_column("y", y));
  return glassbox::Frame::from_columns(std::move(cols));
}

}  // namespace gbtest
