#pragma once

#include <stdexcept>
#include <string>

namespace glassbox {

// Input data problems: missing files, malformed CSV, schema mismatches.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Model problems: bad persisted files, scoring a row that does not match
// the training schema, missing node statistics.
struct ModelError : std::runtime_error {
  explicit ModelError(const std::string& msg) : std::runtime_error(msg) {}
};

// Caller passed an argument outside an operation's contract.
struct InvalidArgument : std::invalid_argument {
  explicit InvalidArgument(const std::string& msg) : std::invalid_argument(msg) {}
};

}  // namespace glassbox
