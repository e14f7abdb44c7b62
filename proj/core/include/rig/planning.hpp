#pragma once

#include <vector>

#include "rig/objectives.hpp"
#include "rig/plan_set.hpp"
#include "rig/scenario.hpp"

namespace rig {

struct SinglePlan {
  ControlSequence controls;
  double value = 0.0;  ///< info_gain of fixed_plans plus this sequence
};

/// Best control sequence for one robot given already-fixed plans of a
/// disjoint robot set. Exhaustive mode enumerates all |U|^T sequences;
/// GreedyPerStep picks each step's control by one-step gain. Ties break
/// lexicographically over the control set's declared order. The returned
/// value is info_gain re-evaluated on the returned plan.
SinglePlan plan_single(const Scenario& scenario, int robot_id, const PlanSet& fixed_plans);

struct CoordinateDescentPlan {
  PlanSet plans;
  int rounds = 0;  ///< one transmission per robot
};

/// Sequential coordinate descent: each robot in `order` solves its single
/// robot problem given the accumulated plans of its predecessors.
CoordinateDescentPlan coordinate_descent(const Scenario& scenario, const std::vector<int>& order);

std::vector<int> ascending_order(int num_robots);

struct JointPlan {
  PlanSet plans;
  double value = 0.0;
};

/// Exhaustive joint maximization of the information gain over all control
/// assignments of the given robots. Guarded by planner.max_expansions.
JointPlan plan_joint_exhaustive(const Scenario& scenario, const std::vector<int>& robots);

}  // namespace rig
