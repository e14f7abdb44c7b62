#include "rig/scenario.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "rig/errors.hpp"

namespace rig {

void Scenario::validate() const {
  if (!(env_side > 0.0)) throw ConfigError("environment side must be positive");
  if (robot_starts.empty()) throw ConfigError("need at least one robot");
  if (num_robots() > 64) throw ConfigError("at most 64 robots supported");
  if (num_targets < 1) throw ConfigError("need at least one target");
  if (target_prior_mean.size() != state_dim()) {
    throw ConfigError("target prior mean must have dimension 4*M");
  }
  if (target_prior_cov.rows() != state_dim() || target_prior_cov.cols() != state_dim()) {
    throw ConfigError("target prior covariance must be 4*M x 4*M");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(target_prior_cov);
  if (llt.info() != Eigen::Success) {
    throw ConfigError("target prior covariance must be positive definite");
  }
  sensor.validate();
  if (!(tau > 0.0)) throw ConfigError("tau must be positive");
  if (process_noise_q < 0.0) throw ConfigError("process noise intensity must be >= 0");
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  if (total_steps < 1 || total_steps % horizon != 0) {
    throw ConfigError("total steps must be a positive multiple of the horizon");
  }
  if (alpha < 0 || alpha > num_robots()) throw ConfigError("alpha must be in [0, n]");
  if (control_set.empty()) throw ConfigError("control set must be nonempty");

  for (const auto& r : robot_starts) {
    if (!(r.x1 >= 0.0 && r.x1 <= env_side && r.x2 >= 0.0 && r.x2 <= env_side)) {
      throw ConfigError("robot start outside environment bounds");
    }
  }
  for (int m = 0; m < num_targets; ++m) {
    const double y1 = target_prior_mean[4 * m];
    const double y2 = target_prior_mean[4 * m + 1];
    if (!(y1 >= 0.0 && y1 <= env_side && y2 >= 0.0 && y2 <= env_side)) {
      throw ConfigError("target prior mean outside environment bounds");
    }
    for (const auto& r : robot_starts) {
      if (std::hypot(y1 - r.x1, y2 - r.x2) == 0.0) {
        throw ConfigError("robot start coincides with a target prior mean");
      }
    }
  }
}

std::vector<RobotState> rollout(const Scenario& scenario, int robot_id,
                                const ControlSequence& controls) {
  std::vector<RobotState> poses;
  poses.reserve(controls.size());
  RobotState pose = scenario.robot_starts.at(robot_id);
  for (const auto& u : controls) {
    pose = unicycle_step(pose, u, scenario.tau, scenario.paper_literal_unicycle);
    poses.push_back(pose);
  }
  return poses;
}

}  // namespace rig
