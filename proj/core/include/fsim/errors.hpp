#pragma once

#include <stdexcept>
#include <string>

namespace fsim {

// Malformed or unreadable input data (CSV/JSON). Messages carry the file path
// and, where applicable, the 1-based row/column of the first offending cell.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerically degenerate input for an otherwise well-formed call
// (singular regression, zero-norm coefficient vector, ...).
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fsim
