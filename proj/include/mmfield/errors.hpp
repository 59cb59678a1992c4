#pragma once

#include <stdexcept>
#include <string>

namespace mmf {

/// Precondition or shape violation on a public entry point.
struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A transport/flow problem with no feasible solution (mismatched marginals).
struct InfeasibleProblem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Requested an exact/certified mode beyond its supported instance size.
struct SizeLimitExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A constructed object failed its own validation (internal consistency bug
/// or a numerically hostile input).
struct ValidationFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mmf
