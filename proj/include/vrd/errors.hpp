#pragma once

#include <stdexcept>
#include <string>

namespace vrd {

// Invalid data handed to an operation (bad box, dimension mismatch, ...).
struct InputError : std::runtime_error {
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration (thresholds out of order, empty batch, ...).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite values or other numeric failures during computation.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// File system / serialization failures.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed file contents; carries the offending line when known.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
  ParseError(const std::string& file, long line, const std::string& msg)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + msg) {}
};

// Missing key in a lookup table (embedding vocabulary, category names, ...).
struct LookupError : std::runtime_error {
  explicit LookupError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace vrd
