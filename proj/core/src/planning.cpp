#include "rig/planning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "rig/errors.hpp"

namespace rig {

namespace {

// |U|^steps with an early throw once the budget is crossed.
std::uint64_t sequence_count(std::size_t num_controls, int steps, std::uint64_t budget,
                             const char* who) {
  std::uint64_t count = 1;
  for (int t = 0; t < steps; ++t) {
    if (count > budget / std::max<std::uint64_t>(num_controls, 1)) {
      throw BudgetError(std::string(who) + ": expansion budget exceeded");
    }
    count *= num_controls;
  }
  if (count > budget) throw BudgetError(std::string(who) + ": expansion budget exceeded");
  return count;
}

// Lexicographic odometer over control indices; returns false after the last
// assignment.
bool advance(std::vector<std::size_t>& digits, std::size_t base) {
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    if (++*it < base) return true;
    *it = 0;
  }
  return false;
}

double step_score(ObjectiveKind kind, const Eigen::MatrixXd& cov) {
  if (kind == ObjectiveKind::TraceGain) return cov.trace();
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("plan_single: covariance not positive definite under log-det");
  }
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

ControlSequence greedy_sequence(const Scenario& scenario, int robot_id,
                                const PlanSet& fixed_plans) {
  const auto model = scenario.target_model();

  std::vector<std::vector<RobotState>> fixed_poses;
  for (const auto& [id, seq] : fixed_plans.sequences) {
    fixed_poses.push_back(rollout(scenario, id, seq));
  }

  ControlSequence chosen;
  chosen.reserve(scenario.horizon);
  Eigen::VectorXd mean = scenario.target_prior_mean;
  Eigen::MatrixXd cov = scenario.target_prior_cov;
  RobotState pose = scenario.robot_starts.at(robot_id);

  for (int t = 0; t < scenario.horizon; ++t) {
    mean = model.A * mean;
    cov = symmetrized(model.A * cov * model.A.transpose() + model.W);

    // Predecessors' measurements are shared by every candidate; fold them in
    // once per step.
    int rows = 0;
    std::vector<StackedObservation> fixed_obs;
    fixed_obs.reserve(fixed_poses.size());
    for (const auto& poses : fixed_poses) {
      fixed_obs.push_back(stacked_observation(poses[t], mean, scenario.sensor));
      rows += static_cast<int>(fixed_obs.back().jacobian.rows());
    }
    if (rows > 0) {
      Eigen::MatrixXd H = Eigen::MatrixXd::Zero(rows, mean.size());
      Eigen::MatrixXd V = Eigen::MatrixXd::Zero(rows, rows);
      int at = 0;
      for (const auto& o : fixed_obs) {
        const int r = static_cast<int>(o.jacobian.rows());
        if (r == 0) continue;
        H.middleRows(at, r) = o.jacobian;
        V.block(at, at, r, r) = o.noise_cov;
        at += r;
      }
      cov = joseph_step(cov, H, V).cov;
    }

    double best_score = std::numeric_limits<double>::infinity();
    std::size_t best_index = 0;
    RobotState best_pose = pose;
    Eigen::MatrixXd best_cov = cov;
    for (std::size_t c = 0; c < scenario.control_set.size(); ++c) {
      const RobotState cand_pose = unicycle_step(pose, scenario.control_set[c], scenario.tau,
                                                 scenario.paper_literal_unicycle);
      const auto obs = stacked_observation(cand_pose, mean, scenario.sensor);
      Eigen::MatrixXd cand_cov =
          obs.jacobian.rows() > 0 ? joseph_step(cov, obs.jacobian, obs.noise_cov).cov : cov;
      const double score = step_score(scenario.objective, cand_cov);
      if (score < best_score) {
        best_score = score;
        best_index = c;
        best_pose = cand_pose;
        best_cov = std::move(cand_cov);
      }
    }
    chosen.push_back(scenario.control_set[best_index]);
    pose = best_pose;
    cov = clamp_psd(best_cov);
  }
  return chosen;
}

ControlSequence exhaustive_sequence(const Scenario& scenario, int robot_id,
                                    const PlanSet& fixed_plans) {
  sequence_count(scenario.control_set.size(), scenario.horizon, scenario.planner.max_expansions,
                 "plan_single");

  const RobotMask active = mask_with(fixed_plans.robots(), robot_id);
  PlanSet candidate = fixed_plans;

  std::vector<std::size_t> digits(scenario.horizon, 0);
  ControlSequence best_seq;
  double best_value = -std::numeric_limits<double>::infinity();
  bool more = true;
  while (more) {
    ControlSequence seq;
    seq.reserve(digits.size());
    for (std::size_t d : digits) seq.push_back(scenario.control_set[d]);
    candidate.sequences[robot_id] = seq;
    const double value = info_gain(scenario, active, candidate);
    if (value > best_value) {
      best_value = value;
      best_seq = std::move(seq);
    }
    more = advance(digits, scenario.control_set.size());
  }
  return best_seq;
}

}  // namespace

SinglePlan plan_single(const Scenario& scenario, int robot_id, const PlanSet& fixed_plans) {
  if (robot_id < 0 || robot_id >= scenario.num_robots()) {
    throw DimensionError("plan_single: robot id out of range");
  }
  if (fixed_plans.contains(robot_id)) {
    throw DimensionError("plan_single: robot already covered by fixed plans");
  }
  if (scenario.horizon == 0) return {ControlSequence{}, 0.0};
  if (scenario.control_set.empty()) throw ConfigError("plan_single: empty control set");

  ControlSequence seq = scenario.planner.mode == PlannerMode::Exhaustive
                            ? exhaustive_sequence(scenario, robot_id, fixed_plans)
                            : greedy_sequence(scenario, robot_id, fixed_plans);

  PlanSet full = fixed_plans;
  full.sequences[robot_id] = seq;
  const double value = info_gain(scenario, mask_with(fixed_plans.robots(), robot_id), full);
  return {std::move(seq), value};
}

CoordinateDescentPlan coordinate_descent(const Scenario& scenario, const std::vector<int>& order) {
  std::set<int> seen;
  for (int id : order) {
    if (id < 0 || id >= scenario.num_robots() || !seen.insert(id).second) {
      throw DimensionError("coordinate_descent: order must be a set of valid robot ids");
    }
  }
  CoordinateDescentPlan result;
  for (int id : order) {
    SinglePlan sp = plan_single(scenario, id, result.plans);
    result.plans.sequences[id] = std::move(sp.controls);
    ++result.rounds;
  }
  return result;
}

std::vector<int> ascending_order(int num_robots) {
  std::vector<int> order(num_robots);
  for (int i = 0; i < num_robots; ++i) order[i] = i;
  return order;
}

JointPlan plan_joint_exhaustive(const Scenario& scenario, const std::vector<int>& robots) {
  if (robots.empty()) return {};
  for (int id : robots) {
    if (id < 0 || id >= scenario.num_robots()) {
      throw DimensionError("plan_joint_exhaustive: robot id out of range");
    }
  }
  sequence_count(scenario.control_set.size(),
                 scenario.horizon * static_cast<int>(robots.size()),
                 scenario.planner.max_expansions, "plan_joint_exhaustive");

  const RobotMask active = mask_of(robots);
  std::vector<std::size_t> digits(robots.size() * scenario.horizon, 0);
  JointPlan best;
  best.value = -std::numeric_limits<double>::infinity();
  bool more = true;
  while (more) {
    PlanSet plans;
    for (std::size_t r = 0; r < robots.size(); ++r) {
      ControlSequence seq;
      seq.reserve(scenario.horizon);
      for (int t = 0; t < scenario.horizon; ++t) {
        seq.push_back(scenario.control_set[digits[r * scenario.horizon + t]]);
      }
      plans.sequences[robots[r]] = std::move(seq);
    }
    const double value = info_gain(scenario, active, plans);
    if (value > best.value) {
      best.value = value;
      best.plans = std::move(plans);
    }
    more = advance(digits, scenario.control_set.size());
  }
  return best;
}

}  // namespace rig
