#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "rig/dynamics.hpp"
#include "rig/plan_set.hpp"

namespace rig {

enum class ObjectiveKind { LogDetGain, TraceGain };

enum class PlannerMode { Exhaustive, GreedyPerStep };

struct PlannerConfig {
  PlannerMode mode = PlannerMode::GreedyPerStep;
  std::uint64_t max_expansions = 1'000'000;
};

/// Full experiment configuration: team, targets, sensing, horizon, attack
/// budget, planner, seeds. Planner and oracle operations read the team poses
/// and target prior from here; the receding-horizon simulator re-binds both
/// every planning phase.
struct Scenario {
  double env_side = 64.0;

  std::vector<RobotState> robot_starts;

  int num_targets = 1;
  Eigen::VectorXd target_prior_mean;  ///< stacked 4M vector
  Eigen::MatrixXd target_prior_cov;   ///< 4M x 4M, positive definite

  /// Seeded-placement parameters, consumed by materialize_scenario when the
  /// poses or the prior above are left empty.
  int team_size = 0;
  double prior_position_std = 2.0;
  double prior_velocity_std = 0.25;

  SensorParams sensor;
  double tau = 0.5;
  double process_noise_q = 0.001;
  bool paper_literal_unicycle = false;

  int horizon = 25;     ///< T, steps per planning phase
  int total_steps = 100;
  int alpha = 0;
  /// Attacked robots normally rejoin at the next planning phase; with this
  /// set they stay removed for the rest of the trial.
  bool permanent_removal = false;

  /// Admissible control set; vector order is the declared tie-break order.
  std::vector<ControlInput> control_set;

  PlannerConfig planner;
  ObjectiveKind objective = ObjectiveKind::LogDetGain;

  std::vector<std::uint64_t> seeds;

  int num_robots() const { return static_cast<int>(robot_starts.size()); }
  int state_dim() const { return 4 * num_targets; }
  TargetModel target_model() const { return target_transition(tau, process_noise_q, num_targets); }

  /// Checks the cross-field invariants needed to run a simulation; throws
  /// ConfigError with the first violation.
  void validate() const;
};

/// Poses at t = 1..T reached from the robot's start pose under a sequence.
std::vector<RobotState> rollout(const Scenario& scenario, int robot_id,
                                const ControlSequence& controls);

}  // namespace rig
