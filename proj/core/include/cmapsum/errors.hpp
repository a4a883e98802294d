#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cmapsum {

// I/O failures: missing files, network errors, unreadable archives.
// The CLI maps these to exit code 1.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid inputs: malformed files, violated invariants, bad arguments,
// failed preconditions. The CLI maps these to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parse failure carrying file/line context.
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : ValidationError(file + ":" + std::to_string(line) + ": " + what) {}
};

}  // namespace cmapsum
