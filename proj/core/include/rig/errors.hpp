#pragma once

#include <stdexcept>
#include <string>

namespace rig {

/// Non-finite robot state, control, or step size.
struct InvalidStateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Robot and target coincide; the range-bearing Jacobian is undefined.
struct SingularGeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Innovation covariance too ill-conditioned to invert reliably.
struct IllConditionedUpdateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Planner expansion budget exceeded.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Brute-force enumeration guard exceeded (fails loudly, never degrades to sampling).
struct EnumerationGuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Set function fails the hypothesis of the requested computation.
struct NotInClassError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Total curvature has a zero marginal in a denominator against a nonzero numerator.
struct UndefinedCurvatureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rig
