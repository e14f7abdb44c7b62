#include <cmath>

#include "doctest.h"

#include "rig/bounds.hpp"
#include "rig/errors.hpp"
#include "rig/math_util.hpp"
#include "rig/objectives.hpp"
#include "rig/oracle.hpp"
#include "rig/planning.hpp"
#include "rig/resilient.hpp"

using namespace rig;

namespace {

Scenario twin_scenario() {
  Scenario s;
  s.env_side = 40.0;
  s.robot_starts = {{18.0, 20.0, 0.0}, {18.0, 20.0, 0.0}, {35.0, 35.0, 0.0}};
  s.num_targets = 1;
  s.target_prior_mean = Eigen::VectorXd::Zero(4);
  s.target_prior_mean[0] = 21.0;
  s.target_prior_mean[1] = 20.0;
  s.target_prior_cov = Eigen::MatrixXd::Identity(4, 4);
  s.sensor = SensorParams{8.0, deg_to_rad(120.0), 0.2, 0.1};
  s.tau = 0.5;
  s.process_noise_q = 0.01;
  s.horizon = 1;
  s.total_steps = 1;
  s.alpha = 1;
  s.control_set = {{1.0, 0.0}, {1.0, 1.0}};
  s.planner.mode = PlannerMode::Exhaustive;
  return s;
}

}  // namespace

TEST_CASE("step 1: blind robots have zero marginal, twins have equal marginals") {
  const Scenario s = twin_scenario();  // robot 2 is far from the target
  const auto solos = step1_marginals(s);
  REQUIRE(solos.size() == 3);
  CHECK(solos.at(0).marginal == solos.at(1).marginal);
  CHECK(solos.at(0).controls == solos.at(1).controls);
  CHECK(solos.at(2).marginal == 0.0);

  // q_i equals the info gain of the returned solo plan, bit-exact.
  for (const auto& [id, solo] : solos) {
    PlanSet set;
    set.sequences[id] = solo.controls;
    CHECK(solo.marginal == info_gain(s, mask_with(0, id), set));
  }
}

TEST_CASE("step 2: bait selection by marginal with id tie-break") {
  std::map<int, double> q{{0, 3.0}, {1, 1.0}, {2, 2.0}};

  CHECK(step2_select_bait(q, 0).members.empty());
  CHECK(step2_select_bait(q, 3).members == std::vector<int>{0, 1, 2});

  const BaitSet bait = step2_select_bait(q, 2);
  CHECK(bait.members == std::vector<int>{0, 2});
  // Oracle: of all 2-subsets, {0,2} has the largest total marginal.
  double best = -1.0;
  std::vector<int> best_set;
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      if (q[a] + q[b] > best) {
        best = q[a] + q[b];
        best_set = {a, b};
      }
    }
  }
  CHECK(bait.members == best_set);

  // Ties break toward the smaller id.
  std::map<int, double> tied{{0, 1.0}, {1, 1.0}, {2, 1.0}};
  CHECK(step2_select_bait(tied, 2).members == std::vector<int>{0, 1});

  CHECK_THROWS_AS(step2_select_bait(q, 4), DimensionError);
}

TEST_CASE("bait marginals dominate the rest") {
  RandomStream rng(41, "bait");
  for (int i = 0; i < 50; ++i) {
    std::map<int, double> q;
    const int n = 2 + static_cast<int>(rng.uniform_index(5));
    for (int id = 0; id < n; ++id) q[id] = rng.uniform_index(4) * 0.5;  // ties likely
    const int alpha = static_cast<int>(rng.uniform_index(n + 1));
    const BaitSet bait = step2_select_bait(q, alpha);
    CHECK(static_cast<int>(bait.members.size()) == alpha);
    double bait_min = std::numeric_limits<double>::infinity();
    for (int id : bait.members) bait_min = std::min(bait_min, q[id]);
    for (const auto& [id, value] : q) {
      if (!bait.contains(id)) CHECK(bait_min >= value);
    }
  }
}

TEST_CASE("algorithm1 with alpha = 0 is exactly coordinate descent") {
  RandomStream rng(43, "alpha0");
  for (int i = 0; i < 10; ++i) {
    Scenario s = random_desk_scenario(rng);
    const ResilientPlan rp = algorithm1(s, 0);
    const CoordinateDescentPlan cd = coordinate_descent(s, ascending_order(s.num_robots()));
    CHECK(rp.plans == cd.plans);
    CHECK(rp.bait.members.empty());
    CHECK(rp.rounds == 2 * s.num_robots() + s.num_robots());
  }
}

TEST_CASE("algorithm1 with alpha = n hands every robot its solo plan") {
  const Scenario s = twin_scenario();
  const auto solos = step1_marginals(s);
  const ResilientPlan rp = algorithm1(s, 3);
  CHECK(rp.bait.members == std::vector<int>{0, 1, 2});
  for (int id = 0; id < 3; ++id) CHECK(rp.plans.sequences.at(id) == solos.at(id).controls);
  CHECK(rp.rounds == 2 * 3);
}

TEST_CASE("round ledger and bait plan immutability") {
  RandomStream rng(47, "ledger");
  for (int i = 0; i < 10; ++i) {
    const Scenario s = random_desk_scenario(rng);
    const int n = s.num_robots();
    const auto solos = step1_marginals(s);
    const int alpha = static_cast<int>(rng.uniform_index(n + 1));
    const ResilientPlan rp = algorithm1(s, alpha);
    CHECK(rp.rounds == 2 * n + (n - static_cast<int>(rp.bait.members.size())));
    CHECK(rp.rounds <= 3 * n);
    CHECK(static_cast<int>(rp.bait.members.size()) == alpha);
    for (int id : rp.bait.members) {
      CHECK(rp.plans.sequences.at(id) == solos.at(id).controls);
    }
    CHECK(rp.plans.robots() == full_mask(n));
  }
}

TEST_CASE("tiny Theorem 1 bound instance with exhaustive sub-solvers") {
  RandomStream rng(53, "thm1");
  int verified = 0;
  for (int i = 0; i < 60 && verified < 5; ++i) {
    Scenario s = random_desk_scenario(rng);
    if (s.num_robots() != 3) continue;
    s.alpha = 1;
    const InstanceClass cls = classify_instance(s);
    if (!cls.monotone || !cls.submodular) continue;

    const MaxMinResult maxmin = exhaustive_maxmin(s, 1);
    if (maxmin.value <= 1e-9) continue;
    const ResilientPlan rp = algorithm1(s, 1, Step4Solver::ExhaustiveJoint);
    const SetFunctionView view(s, rp.plans);
    const AttackReport attack = worst_case_attack(view, 1);
    const double ratio = attack.degraded_value / maxmin.value;
    const double kappa_part = cls.kappa_defined ? 1.0 - cls.kappa : 0.0;
    CHECK(ratio >= std::max(kappa_part, 0.5) - 1e-9);
    ++verified;
  }
  CHECK(verified == 5);
}
