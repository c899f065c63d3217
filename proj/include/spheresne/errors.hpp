#pragma once

#include <stdexcept>
#include <string>

namespace spheresne {

// Bad arguments, malformed files, contract violations. CLI exit code 2.
struct validation_error : std::runtime_error {
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite values, degenerate geometry, exhausted iterations. CLI exit code 3.
struct numeric_error : std::runtime_error {
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem failures. CLI exit code 4.
struct io_error : std::runtime_error {
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace spheresne
