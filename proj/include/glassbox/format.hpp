#pragma once

#include <charconv>
#include <string>

namespace glassbox {

// Shortest decimal that round-trips the exact double, the serialization used
// by every machine-readable output.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Fixed decimal places, for narrative text where aligned digits read better.
inline std::string format_fixed(double v, int digits) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, digits);
  return std::string(buf, res.ptr);
}

}  // namespace glassbox
