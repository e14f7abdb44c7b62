#include "rig/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rig/errors.hpp"
#include "rig/math_util.hpp"

namespace rig {

namespace {
constexpr double kNoiseRampFloor = 0.1;
}

void SensorParams::validate() const {
  if (!(range > 0.0)) throw ConfigError("sensor range must be positive");
  if (!(fov > 0.0 && fov <= 2.0 * kPi)) throw ConfigError("sensor fov must be in (0, 2*pi]");
  if (!(sigma_range > 0.0)) throw ConfigError("sigma_range must be positive");
  if (!(sigma_bearing > 0.0)) throw ConfigError("sigma_bearing must be positive");
}

RobotState unicycle_step(const RobotState& state, const ControlInput& u, double tau,
                         bool paper_literal) {
  if (!std::isfinite(state.x1) || !std::isfinite(state.x2) || !std::isfinite(state.theta) ||
      !std::isfinite(u.nu) || !std::isfinite(u.omega) || !std::isfinite(tau)) {
    throw InvalidStateError("unicycle_step: non-finite input");
  }
  if (!(tau > 0.0)) throw InvalidStateError("unicycle_step: tau must be positive");

  const double half = 0.5 * u.omega * tau;
  const double displacement = u.nu * sinc(half) * (paper_literal ? 1.0 : tau);
  RobotState next;
  next.x1 = state.x1 + displacement * std::cos(state.theta + half);
  next.x2 = state.x2 + displacement * std::sin(state.theta + half);
  next.theta = wrap_angle(state.theta + tau * u.omega);
  return next;
}

TargetModel target_transition(double tau, double q, int num_targets) {
  if (!(tau > 0.0)) throw InvalidStateError("target_transition: tau must be positive");
  if (q < 0.0) throw InvalidStateError("target_transition: noise intensity must be >= 0");
  if (num_targets < 1) throw InvalidStateError("target_transition: need at least one target");

  Eigen::Matrix4d a = Eigen::Matrix4d::Identity();
  a(0, 2) = tau;
  a(1, 3) = tau;

  Eigen::Matrix4d w = Eigen::Matrix4d::Zero();
  const double t3 = tau * tau * tau / 3.0;
  const double t2 = tau * tau / 2.0;
  w(0, 0) = w(1, 1) = q * t3;
  w(2, 2) = w(3, 3) = q * tau;
  w(0, 2) = w(2, 0) = q * t2;
  w(1, 3) = w(3, 1) = q * t2;

  TargetModel model;
  model.num_targets = num_targets;
  const int n = 4 * num_targets;
  model.A = Eigen::MatrixXd::Zero(n, n);
  model.W = Eigen::MatrixXd::Zero(n, n);
  for (int m = 0; m < num_targets; ++m) {
    model.A.block<4, 4>(4 * m, 4 * m) = a;
    model.W.block<4, 4>(4 * m, 4 * m) = w;
  }
  return model;
}

std::optional<RangeBearing> observe(const RobotState& robot, const Eigen::Vector4d& target,
                                    const SensorParams& params) {
  const double dx = target[0] - robot.x1;
  const double dy = target[1] - robot.x2;
  const double r = std::hypot(dx, dy);
  if (r == 0.0) throw SingularGeometryError("observe: robot and target coincide");

  const double bearing = wrap_angle(std::atan2(dy, dx) - robot.theta);
  if (r > params.range) return std::nullopt;
  if (std::abs(bearing) > 0.5 * params.fov) return std::nullopt;
  return RangeBearing{r, bearing};
}

Eigen::Matrix<double, 2, 4> measurement_jacobian(const RobotState& robot,
                                                 const Eigen::Vector4d& target) {
  const double dx = target[0] - robot.x1;
  const double dy = target[1] - robot.x2;
  const double r = std::hypot(dx, dy);
  if (r == 0.0) throw SingularGeometryError("measurement_jacobian: robot and target coincide");

  // theta + alpha is the world-frame angle to the target.
  const double los = std::atan2(dy, dx);
  Eigen::Matrix<double, 2, 4> jac = Eigen::Matrix<double, 2, 4>::Zero();
  jac(0, 0) = dx / r;
  jac(0, 1) = dy / r;
  jac(1, 0) = -std::sin(los) / r;
  jac(1, 1) = std::cos(los) / r;
  return jac;
}

double range_noise_std(double range, const SensorParams& params) {
  const double ramp = std::clamp(range / params.range, kNoiseRampFloor, 1.0);
  return params.sigma_range * ramp;
}

double bearing_noise_std(double bearing, const SensorParams& params) {
  const double ramp = std::clamp(std::abs(bearing) / (0.5 * params.fov), kNoiseRampFloor, 1.0);
  return params.sigma_bearing * ramp;
}

StackedObservation stacked_observation(const RobotState& robot, const Eigen::VectorXd& joint_target,
                                       const SensorParams& params) {
  if (joint_target.size() % 4 != 0) {
    throw DimensionError("stacked_observation: joint target dimension must be 4*M");
  }
  const int num_targets = static_cast<int>(joint_target.size() / 4);

  StackedObservation out;
  std::vector<Eigen::Matrix<double, 2, 4>> blocks;
  std::vector<double> stds;
  for (int m = 0; m < num_targets; ++m) {
    const Eigen::Vector4d y = joint_target.segment<4>(4 * m);
    const auto rb = observe(robot, y, params);
    if (!rb) continue;
    out.visible.push_back(m);
    blocks.push_back(measurement_jacobian(robot, y));
    stds.push_back(range_noise_std(rb->range, params));
    stds.push_back(bearing_noise_std(rb->bearing, params));
  }

  const int rows = 2 * static_cast<int>(out.visible.size());
  out.jacobian = Eigen::MatrixXd::Zero(rows, joint_target.size());
  out.noise_cov = Eigen::MatrixXd::Zero(rows, rows);
  for (std::size_t k = 0; k < out.visible.size(); ++k) {
    out.jacobian.block<2, 4>(2 * static_cast<int>(k), 4 * out.visible[k]) = blocks[k];
    out.noise_cov(2 * k, 2 * k) = stds[2 * k] * stds[2 * k];
    out.noise_cov(2 * k + 1, 2 * k + 1) = stds[2 * k + 1] * stds[2 * k + 1];
  }
  return out;
}

}  // namespace rig
