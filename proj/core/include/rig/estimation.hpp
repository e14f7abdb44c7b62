#pragma once

#include <vector>

#include <Eigen/Core>

#include "rig/dynamics.hpp"

namespace rig {

/// Gaussian belief over the joint target state.
struct GaussianBelief {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// Error covariances Sigma_1..Sigma_T along a horizon.
using CovarianceTrajectory = std::vector<Eigen::MatrixXd>;

/// Covariance and Kalman gain of one measurement update.
struct KalmanStep {
  Eigen::MatrixXd cov;
  Eigen::MatrixXd gain;
};

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m);

/// Symmetrize and floor negative eigenvalues at zero. Warns on stderr when a
/// clamped eigenvalue is below -1e-9.
Eigen::MatrixXd clamp_psd(const Eigen::MatrixXd& m);

GaussianBelief kf_predict(const GaussianBelief& belief, const Eigen::MatrixXd& A,
                          const Eigen::MatrixXd& W);

/// Joseph-form covariance update. Throws IllConditionedUpdateError when the
/// innovation covariance H*cov*H' + V has condition number above 1e12.
KalmanStep joseph_step(const Eigen::MatrixXd& cov, const Eigen::MatrixXd& H,
                       const Eigen::MatrixXd& V);

/// Standard update with linear innovation z - H*mean. Empty H returns the
/// belief unchanged.
GaussianBelief kf_update(const GaussianBelief& belief, const Eigen::MatrixXd& H,
                         const Eigen::MatrixXd& V, const Eigen::VectorXd& z);

/// Update with a caller-supplied innovation (EKF residuals need angle
/// wrapping that the linear form cannot express).
GaussianBelief kf_update_with_innovation(const GaussianBelief& belief, const Eigen::MatrixXd& H,
                                         const Eigen::MatrixXd& V,
                                         const Eigen::VectorXd& innovation);

/// Covariance-only Riccati recursion over a horizon: per step, predict with
/// the target model, then update with the stacked observation of every active
/// robot at its step-t pose. Jacobians are linearized about the target mean
/// trajectory predicted once from the prior; no measurement realizations are
/// involved. An empty trajectory list yields the prediction-only recursion.
///
/// trajectories[i] holds one robot's poses at t = 1..horizon; all must share
/// length horizon.
CovarianceTrajectory riccati_propagate(const GaussianBelief& prior,
                                       const std::vector<std::vector<RobotState>>& trajectories,
                                       const TargetModel& model, const SensorParams& params,
                                       int horizon);

}  // namespace rig
