#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

namespace rig {

/// SE(2) pose of one robot. theta is kept in (-pi, pi].
struct RobotState {
  double x1 = 0.0;     ///< meters
  double x2 = 0.0;     ///< meters
  double theta = 0.0;  ///< radians

  bool operator==(const RobotState&) const = default;
};

/// (speed, turn rate) pair from the finite admissible control set.
struct ControlInput {
  double nu = 0.0;     ///< m/s
  double omega = 0.0;  ///< rad/s

  bool operator==(const ControlInput&) const = default;
};

/// Range/bearing sensor with limited range and field of view.
struct SensorParams {
  double range = 10.0;                  ///< r_sense, meters
  double fov = 2.0;                     ///< full field-of-view angle psi, radians
  double sigma_range = 0.15;            ///< max range std-dev, meters
  double sigma_bearing = 0.0872664626;  ///< max bearing std-dev, radians

  void validate() const;
};

struct RangeBearing {
  double range = 0.0;
  double bearing = 0.0;
};

/// Joint double-integrator transition: block-diagonal A and process noise W
/// over all targets, state per target (y1, y2, vy1, vy2).
struct TargetModel {
  Eigen::MatrixXd A;
  Eigen::MatrixXd W;
  int num_targets = 0;
};

/// Linearized joint observation restricted to visible targets.
struct StackedObservation {
  Eigen::MatrixXd jacobian;   ///< (2k) x (4M), block per visible target
  Eigen::MatrixXd noise_cov;  ///< (2k) x (2k), diagonal
  std::vector<int> visible;   ///< target indices contributing rows, ascending
};

/// One discrete unicycle step: the position advances by
/// nu*tau*sinc(omega*tau/2) along heading theta + omega*tau/2 and the heading
/// by tau*omega. With paper_literal the displacement magnitude drops the tau
/// factor (nu*sinc(omega*tau/2)).
RobotState unicycle_step(const RobotState& state, const ControlInput& u, double tau,
                         bool paper_literal = false);

TargetModel target_transition(double tau, double q, int num_targets);

/// Range and bearing of one target from a robot pose, or nullopt when the
/// target is outside the sensing range or field of view (boundaries are
/// inclusive). Throws SingularGeometryError when robot and target coincide.
std::optional<RangeBearing> observe(const RobotState& robot, const Eigen::Vector4d& target,
                                    const SensorParams& params);

/// d h / d y of the range-bearing model, 2x4 (position columns only).
Eigen::Matrix<double, 2, 4> measurement_jacobian(const RobotState& robot,
                                                 const Eigen::Vector4d& target);

/// Noise std-devs ramp linearly with range and bearing magnitude up to the
/// sensor maxima, floored at 10% to keep the noise covariance invertible.
double range_noise_std(double range, const SensorParams& params);
double bearing_noise_std(double bearing, const SensorParams& params);

StackedObservation stacked_observation(const RobotState& robot, const Eigen::VectorXd& joint_target,
                                       const SensorParams& params);

}  // namespace rig
