#pragma once

#include <stdexcept>
#include <string>

namespace sobolev {

// Raised when a construction would exceed the configured vertex cap.
struct ResourceCapError : std::runtime_error {
  explicit ResourceCapError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an iterative solver fails to reach its tolerance.
struct NonConvergenceError : std::runtime_error {
  explicit NonConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Raised for invalid arguments, malformed configs, and contract violations.
struct UsageError : std::invalid_argument {
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace sobolev
