#include <cmath>

#include "doctest.h"

#include "rig/bounds.hpp"
#include "rig/errors.hpp"
#include "rig/math_util.hpp"
#include "rig/objectives.hpp"
#include "rig/planning.hpp"
#include "rig/random.hpp"

using namespace rig;

namespace {

Scenario one_robot_scenario() {
  Scenario s;
  s.env_side = 40.0;
  s.robot_starts = {{20.0, 20.0, 0.0}};
  s.num_targets = 1;
  s.target_prior_mean = Eigen::VectorXd::Zero(4);
  s.target_prior_mean[0] = 20.0;
  s.target_prior_mean[1] = 23.0;
  s.target_prior_cov = Eigen::MatrixXd::Identity(4, 4);
  s.sensor = SensorParams{10.0, deg_to_rad(94.0), 0.2, 0.1};
  s.tau = 0.5;
  s.process_noise_q = 0.01;
  s.horizon = 1;
  s.total_steps = 1;
  s.control_set = {{1.0, 3.0}, {1.0, -3.0}};  // turn left / turn right
  s.planner.mode = PlannerMode::Exhaustive;
  return s;
}

}  // namespace

TEST_CASE("plan_single with a zero horizon returns an empty plan of zero value") {
  Scenario s = one_robot_scenario();
  s.horizon = 0;
  const SinglePlan plan = plan_single(s, 0, PlanSet{});
  CHECK(plan.controls.empty());
  CHECK(plan.value == 0.0);
}

TEST_CASE("plan_single picks the only sequence that sees the target") {
  // Target is overhead; a left turn brings it into the 94-degree cone, a
  // right turn cannot. Brute-force both sequences as the oracle.
  const Scenario s = one_robot_scenario();
  const SinglePlan plan = plan_single(s, 0, PlanSet{});
  REQUIRE(plan.controls.size() == 1);
  CHECK(plan.controls[0] == ControlInput{1.0, 3.0});

  double best = -1.0;
  ControlInput best_u{};
  for (const auto& u : s.control_set) {
    PlanSet candidate;
    candidate.sequences[0] = {u};
    const double v = info_gain(s, 1, candidate);
    if (v > best) {
      best = v;
      best_u = u;
    }
  }
  CHECK(best_u == plan.controls[0]);
  CHECK(plan.value == best);
  CHECK(plan.value > 0.0);
}

TEST_CASE("plan_single value is bit-exact against info_gain re-evaluation") {
  const Scenario s = one_robot_scenario();
  for (PlannerMode mode : {PlannerMode::Exhaustive, PlannerMode::GreedyPerStep}) {
    Scenario variant = s;
    variant.planner.mode = mode;
    variant.horizon = 2;
    variant.total_steps = 2;
    const SinglePlan plan = plan_single(variant, 0, PlanSet{});
    PlanSet set;
    set.sequences[0] = plan.controls;
    CHECK(plan.value == info_gain(variant, 1, set));
  }
}

TEST_CASE("exhaustive dominates greedy per step") {
  RandomStream rng(31, "planner");
  for (int i = 0; i < 20; ++i) {
    Scenario s = random_desk_scenario(rng);
    s.planner.mode = PlannerMode::Exhaustive;
    const SinglePlan exhaustive = plan_single(s, 0, PlanSet{});
    s.planner.mode = PlannerMode::GreedyPerStep;
    const SinglePlan greedy = plan_single(s, 0, PlanSet{});
    CHECK(exhaustive.value >= greedy.value - 1e-9);
  }
}

TEST_CASE("plan_single honors the expansion budget") {
  Scenario s = one_robot_scenario();
  s.control_set = {{1, 0}, {1, 1}, {1, -1}};
  s.horizon = 3;
  s.total_steps = 3;
  s.planner.max_expansions = 10;  // 27 sequences needed
  CHECK_THROWS_AS(plan_single(s, 0, PlanSet{}), BudgetError);
}

TEST_CASE("plan_single rejects a robot already covered by fixed plans") {
  const Scenario s = one_robot_scenario();
  PlanSet fixed;
  fixed.sequences[0] = {s.control_set[0]};
  CHECK_THROWS_AS(plan_single(s, 0, fixed), DimensionError);
}

TEST_CASE("coordinate descent reduces to plan_single for one robot") {
  const Scenario s = one_robot_scenario();
  const CoordinateDescentPlan cd = coordinate_descent(s, {0});
  const SinglePlan sp = plan_single(s, 0, PlanSet{});
  CHECK(cd.plans.sequences.at(0) == sp.controls);
  CHECK(cd.rounds == 1);
}

TEST_CASE("coordinate descent is deterministic and prefix-monotone") {
  RandomStream rng(37, "cd");
  for (int i = 0; i < 15; ++i) {
    const Scenario s = random_desk_scenario(rng);
    const auto order = ascending_order(s.num_robots());
    const CoordinateDescentPlan a = coordinate_descent(s, order);
    const CoordinateDescentPlan b = coordinate_descent(s, order);
    CHECK(a.plans == b.plans);
    CHECK(a.rounds == s.num_robots());

    // Value of the growing prefix never decreases.
    double prev = 0.0;
    PlanSet prefix;
    for (int k = 0; k < s.num_robots(); ++k) {
      prefix.sequences[order[k]] = a.plans.sequences.at(order[k]);
      const double value = info_gain(s, prefix.robots(), prefix);
      CHECK(value >= prev - 1e-9);
      prev = value;
    }
  }
}

TEST_CASE("joint exhaustive search agrees with plan_single for one robot") {
  Scenario s = one_robot_scenario();
  s.horizon = 2;
  s.total_steps = 2;
  const JointPlan joint = plan_joint_exhaustive(s, {0});
  const SinglePlan single = plan_single(s, 0, PlanSet{});
  CHECK(joint.plans.sequences.at(0) == single.controls);
  CHECK(joint.value == single.value);

  CHECK(plan_joint_exhaustive(s, {}).plans.sequences.empty());
}
