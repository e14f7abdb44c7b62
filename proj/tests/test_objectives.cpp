#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "rig/errors.hpp"
#include "rig/math_util.hpp"
#include "rig/objectives.hpp"
#include "rig/random.hpp"

using namespace rig;

namespace {

// Two robots near one target; every control is admissible for simplicity.
Scenario toy_scenario() {
  Scenario s;
  s.env_side = 40.0;
  s.robot_starts = {{17.0, 20.0, 0.0}, {23.0, 20.0, kPi}};
  s.num_targets = 1;
  s.target_prior_mean = Eigen::VectorXd::Zero(4);
  s.target_prior_mean[0] = 20.0;
  s.target_prior_mean[1] = 20.0;
  s.target_prior_cov = Eigen::MatrixXd::Identity(4, 4);
  s.sensor = SensorParams{10.0, 2.0 * kPi, 0.2, 0.1};
  s.tau = 0.5;
  s.process_noise_q = 0.01;
  s.horizon = 1;
  s.total_steps = 1;
  s.control_set = {{1.0, 0.0}, {1.0, 1.0}};
  s.planner.mode = PlannerMode::Exhaustive;
  return s;
}

PlanSet straight_plans(const Scenario& s) {
  PlanSet plans;
  for (int r = 0; r < s.num_robots(); ++r) {
    plans.sequences[r] = ControlSequence(s.horizon, s.control_set.front());
  }
  return plans;
}

}  // namespace

TEST_CASE("raw objective on reference trajectories") {
  CovarianceTrajectory identity{Eigen::MatrixXd::Identity(4, 4)};
  CHECK(raw_objective(ObjectiveKind::LogDetGain, identity) == doctest::Approx(0.0));

  Eigen::MatrixXd d(2, 2);
  d << 4, 0, 0, 1;
  CHECK(raw_objective(ObjectiveKind::LogDetGain, {d}) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-12));

  Eigen::MatrixXd t(2, 2);
  t << 2, 0, 0, 2;
  CHECK(raw_objective(ObjectiveKind::TraceGain, {t, t}) == doctest::Approx(4.0).epsilon(1e-15));

  CHECK_THROWS_AS(raw_objective(ObjectiveKind::LogDetGain, {Eigen::MatrixXd::Zero(2, 2)}),
                  std::domain_error);
  CHECK_THROWS_AS(raw_objective(ObjectiveKind::LogDetGain, {}), DimensionError);
}

TEST_CASE("info gain is zero on the empty set and for blind robots") {
  const Scenario s = toy_scenario();
  const PlanSet plans = straight_plans(s);
  CHECK(info_gain(s, 0, plans) == 0.0);

  Scenario blind = s;
  blind.robot_starts[1] = {100.0, 100.0, 0.0};  // outside any environment interaction
  blind.env_side = 200.0;
  CHECK(info_gain(blind, RobotMask{2}, straight_plans(blind)) == 0.0);
}

TEST_CASE("two-robot info gain equals the hand-composed log-det difference") {
  const Scenario s = toy_scenario();
  const PlanSet plans = straight_plans(s);
  const double gain = info_gain(s, full_mask(2), plans);

  const auto baseline = propagate_for_subset(s, 0, plans);
  const auto achieved = propagate_for_subset(s, full_mask(2), plans);
  const double expected = raw_objective(s.objective, baseline) -
                          raw_objective(s.objective, achieved);
  CHECK(gain == expected);
  CHECK(gain > 0.0);
}

TEST_CASE("set function view: normalization, memo determinism, monotone in the subset") {
  const Scenario s = toy_scenario();
  SetFunctionView view(s, straight_plans(s));
  CHECK(view.value(0) == 0.0);
  const double v3 = view.value(3);
  CHECK(view.value(3) == v3);  // memo hit is bit-identical
  CHECK(view.value(3) >= view.value(1) - 1e-9);
  CHECK(view.value(3) >= view.value(2) - 1e-9);
  CHECK(info_gain(s, 3, straight_plans(s)) == v3);
}

TEST_CASE("monotonicity across random small scenarios and plans") {
  RandomStream rng(23, "mono");
  for (int trial = 0; trial < 100; ++trial) {
    Scenario s;
    s.env_side = 40.0;
    const int n = 2 + static_cast<int>(rng.uniform_index(3));  // 2..4 robots
    s.num_targets = 1;
    s.target_prior_mean = Eigen::VectorXd::Zero(4);
    s.target_prior_mean[0] = 20.0 + rng.uniform(-2, 2);
    s.target_prior_mean[1] = 20.0 + rng.uniform(-2, 2);
    Eigen::VectorXd diag(4);
    diag << rng.uniform(0.5, 4.0), rng.uniform(0.5, 4.0), rng.uniform(0.01, 0.2),
        rng.uniform(0.01, 0.2);
    s.target_prior_cov = diag.asDiagonal();
    s.sensor = SensorParams{rng.uniform(4.0, 10.0),
                            rng.uniform() < 0.5 ? 2.0 * kPi : deg_to_rad(rng.uniform(80, 200)),
                            rng.uniform(0.1, 0.4), rng.uniform(0.05, 0.8)};
    s.tau = 0.5;
    s.process_noise_q = 0.01;
    s.horizon = 1 + static_cast<int>(rng.uniform_index(2));
    s.total_steps = s.horizon;
    s.control_set = {{1.0, 0.0}, {1.0, 1.0}, {1.0, -1.0}};
    s.objective = rng.uniform() < 0.5 ? ObjectiveKind::LogDetGain : ObjectiveKind::TraceGain;
    for (int r = 0; r < n; ++r) {
      const double ang = rng.uniform(-kPi, kPi);
      const double d = rng.uniform(1.0, 1.2 * s.sensor.range);
      s.robot_starts.push_back({20.0 + d * std::cos(ang), 20.0 + d * std::sin(ang),
                                rng.uniform(-kPi, kPi)});
    }
    PlanSet plans;
    for (int r = 0; r < n; ++r) {
      ControlSequence seq;
      for (int t = 0; t < s.horizon; ++t) {
        seq.push_back(s.control_set[rng.uniform_index(s.control_set.size())]);
      }
      plans.sequences[r] = seq;
    }
    SetFunctionView view(s, plans);
    const RobotMask all = full_mask(n);
    for (RobotMask sub = 0; sub <= all; ++sub) {
      for (int v = 0; v < n; ++v) {
        if (mask_contains(sub, v)) continue;
        CHECK(view.value(mask_with(sub, v)) >= view.value(sub) - 1e-9);
      }
      if (sub == all) break;
    }
  }
}
