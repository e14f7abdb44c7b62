#include "rig/estimation.hpp"

#include <iostream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "rig/errors.hpp"

namespace rig {

namespace {
constexpr double kMaxCondition = 1e12;
constexpr double kPsdWarnMagnitude = 1e-9;
}  // namespace

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

Eigen::MatrixXd clamp_psd(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd sym = symmetrized(m);
  // Fast path: a successful Cholesky proves positive definiteness.
  Eigen::LLT<Eigen::MatrixXd> llt(sym);
  if (llt.info() == Eigen::Success) return sym;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  Eigen::VectorXd vals = eig.eigenvalues();
  bool clamped = false;
  for (int i = 0; i < vals.size(); ++i) {
    if (vals[i] < 0.0) {
      if (vals[i] < -kPsdWarnMagnitude) {
        std::cerr << "rig: clamping covariance eigenvalue " << vals[i] << " to zero\n";
      }
      vals[i] = 0.0;
      clamped = true;
    }
  }
  if (!clamped) return sym;
  return symmetrized(eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().transpose());
}

GaussianBelief kf_predict(const GaussianBelief& belief, const Eigen::MatrixXd& A,
                          const Eigen::MatrixXd& W) {
  if (A.cols() != belief.mean.size() || A.rows() != A.cols() || W.rows() != A.rows() ||
      W.cols() != A.rows() || belief.cov.rows() != belief.mean.size()) {
    throw DimensionError("kf_predict: dimension mismatch");
  }
  GaussianBelief out;
  out.mean = A * belief.mean;
  out.cov = symmetrized(A * belief.cov * A.transpose() + W);
  return out;
}

KalmanStep joseph_step(const Eigen::MatrixXd& cov, const Eigen::MatrixXd& H,
                       const Eigen::MatrixXd& V) {
  if (H.cols() != cov.cols() || V.rows() != H.rows() || V.cols() != H.rows()) {
    throw DimensionError("joseph_step: dimension mismatch");
  }
  if (H.rows() == 0) return {cov, Eigen::MatrixXd::Zero(cov.rows(), 0)};

  const Eigen::MatrixXd innovation_cov = symmetrized(H * cov * H.transpose() + V);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(innovation_cov, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxCondition) {
    throw IllConditionedUpdateError("joseph_step: innovation covariance condition exceeds 1e12");
  }

  Eigen::LLT<Eigen::MatrixXd> llt(innovation_cov);
  KalmanStep step;
  step.gain = llt.solve(H * cov).transpose();
  const Eigen::MatrixXd closed =
      Eigen::MatrixXd::Identity(cov.rows(), cov.cols()) - step.gain * H;
  step.cov = symmetrized(closed * cov * closed.transpose() +
                         step.gain * V * step.gain.transpose());
  return step;
}

GaussianBelief kf_update_with_innovation(const GaussianBelief& belief, const Eigen::MatrixXd& H,
                                         const Eigen::MatrixXd& V,
                                         const Eigen::VectorXd& innovation) {
  if (H.rows() == 0) return belief;
  if (innovation.size() != H.rows()) throw DimensionError("kf_update: innovation rows mismatch");
  const KalmanStep step = joseph_step(belief.cov, H, V);
  GaussianBelief out;
  out.mean = belief.mean + step.gain * innovation;
  out.cov = step.cov;
  return out;
}

GaussianBelief kf_update(const GaussianBelief& belief, const Eigen::MatrixXd& H,
                         const Eigen::MatrixXd& V, const Eigen::VectorXd& z) {
  if (H.rows() == 0) return belief;
  return kf_update_with_innovation(belief, H, V, z - H * belief.mean);
}

CovarianceTrajectory riccati_propagate(const GaussianBelief& prior,
                                       const std::vector<std::vector<RobotState>>& trajectories,
                                       const TargetModel& model, const SensorParams& params,
                                       int horizon) {
  if (horizon < 0) throw DimensionError("riccati_propagate: negative horizon");
  for (const auto& traj : trajectories) {
    if (traj.size() != static_cast<std::size_t>(horizon)) {
      throw DimensionError("riccati_propagate: trajectory length differs from horizon");
    }
  }

  CovarianceTrajectory out;
  Eigen::VectorXd mean = prior.mean;
  Eigen::MatrixXd cov = prior.cov;
  out.reserve(horizon);
  for (int t = 0; t < horizon; ++t) {
    mean = model.A * mean;
    cov = symmetrized(model.A * cov * model.A.transpose() + model.W);

    // Stack every active robot's visible blocks, ascending robot order.
    std::vector<StackedObservation> obs;
    int rows = 0;
    obs.reserve(trajectories.size());
    for (const auto& traj : trajectories) {
      obs.push_back(stacked_observation(traj[t], mean, params));
      rows += static_cast<int>(obs.back().jacobian.rows());
    }
    if (rows > 0) {
      Eigen::MatrixXd H = Eigen::MatrixXd::Zero(rows, mean.size());
      Eigen::MatrixXd V = Eigen::MatrixXd::Zero(rows, rows);
      int at = 0;
      for (const auto& o : obs) {
        const int r = static_cast<int>(o.jacobian.rows());
        if (r == 0) continue;
        H.middleRows(at, r) = o.jacobian;
        V.block(at, at, r, r) = o.noise_cov;
        at += r;
      }
      cov = joseph_step(cov, H, V).cov;
    }
    cov = clamp_psd(cov);
    out.push_back(cov);
  }
  return out;
}

}  // namespace rig
