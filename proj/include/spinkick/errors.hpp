#pragma once

#include <stdexcept>
#include <string>

namespace spinkick {

/// A run was refused because it would exceed a configured resource budget.
struct ResourceLimitError : std::runtime_error {
  explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

/// The numerics went off the rails (norm drift, non-finite results).
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace spinkick
