#pragma once

#include <map>
#include <vector>

#include "rig/plan_set.hpp"
#include "rig/scenario.hpp"

namespace rig {

struct SoloPlan {
  ControlSequence controls;
  double marginal = 0.0;  ///< q_i, the robot's solo information gain
};

/// Step 1: every robot independently solves its single-robot problem.
/// Charges zero communication rounds.
std::map<int, SoloPlan> step1_marginals(const Scenario& scenario);

/// The bait: the min(alpha, n) robots with the largest solo marginals.
struct BaitSet {
  std::vector<int> members;            ///< ascending robot ids
  std::map<int, double> marginals;     ///< q_i for every robot in V

  bool contains(int id) const;
};

/// Step 2: top-alpha selection by marginal, ties broken by ascending robot
/// id. Charges 2|V| rounds (gather and broadcast run even when alpha = 0).
BaitSet step2_select_bait(const std::map<int, double>& marginals, int alpha);

enum class Step4Solver { CoordinateDescent, ExhaustiveJoint };

struct ResilientPlan {
  PlanSet plans;    ///< over all of V: solo plans on the bait, step-4 plans elsewhere
  BaitSet bait;
  int rounds = 0;   ///< 2|V| + |V \ L|
  int alpha = 0;
};

/// The four-step resilient planner: solo marginals, bait selection, bait
/// robots keep their solo plans, and the remaining robots jointly solve the
/// non-resilient problem (coordinate descent by default, exhaustive joint
/// search for bound verification).
ResilientPlan algorithm1(const Scenario& scenario, int alpha,
                         Step4Solver step4 = Step4Solver::CoordinateDescent);

}  // namespace rig
