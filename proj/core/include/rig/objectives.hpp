#pragma once

#include <mutex>
#include <optional>
#include <unordered_map>

#include "rig/estimation.hpp"
#include "rig/scenario.hpp"
#include "rig/set_function.hpp"

namespace rig {

/// Average log-determinant or trace of a covariance trajectory. LogDet
/// requires every covariance to be positive definite and throws
/// std::domain_error otherwise.
double raw_objective(ObjectiveKind kind, const CovarianceTrajectory& covs);

/// Riccati trajectory when the robots in `active` observe under `plans`.
CovarianceTrajectory propagate_for_subset(const Scenario& scenario, RobotMask active,
                                          const PlanSet& plans);

/// Information gain of an active robot subset: the no-observation baseline
/// objective minus the achieved objective. Non-negative, zero on the empty
/// set, and non-decreasing in the subset.
double info_gain(const Scenario& scenario, RobotMask active, const PlanSet& plans);

/// Memoized view of the information gain as a set function over active robot
/// subsets, for a fixed plan set. Thread-safe; repeated evaluation of the
/// same subset is bit-identical.
class SetFunctionView final : public SetFunction {
 public:
  SetFunctionView(const Scenario& scenario, PlanSet plans);

  int ground_size() const override { return scenario_->num_robots(); }
  double value(RobotMask subset) const override;

  const PlanSet& plans() const { return plans_; }

 private:
  const Scenario* scenario_;
  PlanSet plans_;
  mutable std::mutex mutex_;
  mutable std::optional<double> baseline_;
  mutable std::unordered_map<RobotMask, double> memo_;
};

SetFunctionView as_set_function(const Scenario& scenario, const PlanSet& plans);

}  // namespace rig
