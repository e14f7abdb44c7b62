#include "rig/objectives.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "rig/errors.hpp"

namespace rig {

namespace {

double log_det_pd(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("raw_objective: covariance not positive definite under log-det");
  }
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

double achieved_raw(const Scenario& scenario, RobotMask active, const PlanSet& plans) {
  std::vector<std::vector<RobotState>> trajectories;
  for (int id : mask_ids(active)) {
    const auto it = plans.sequences.find(id);
    if (it == plans.sequences.end()) {
      throw DimensionError("info_gain: active robot has no plan");
    }
    if (static_cast<int>(it->second.size()) != scenario.horizon) {
      throw DimensionError("info_gain: plan length differs from horizon");
    }
    trajectories.push_back(rollout(scenario, id, it->second));
  }
  const GaussianBelief prior{scenario.target_prior_mean, scenario.target_prior_cov};
  const auto covs = riccati_propagate(prior, trajectories, scenario.target_model(),
                                      scenario.sensor, scenario.horizon);
  return raw_objective(scenario.objective, covs);
}

double baseline_raw(const Scenario& scenario) {
  const GaussianBelief prior{scenario.target_prior_mean, scenario.target_prior_cov};
  const auto covs = riccati_propagate(prior, {}, scenario.target_model(), scenario.sensor,
                                      scenario.horizon);
  return raw_objective(scenario.objective, covs);
}

}  // namespace

double raw_objective(ObjectiveKind kind, const CovarianceTrajectory& covs) {
  if (covs.empty()) throw DimensionError("raw_objective: empty covariance trajectory");
  double sum = 0.0;
  for (const auto& cov : covs) {
    sum += kind == ObjectiveKind::LogDetGain ? log_det_pd(cov) : cov.trace();
  }
  return sum / static_cast<double>(covs.size());
}

CovarianceTrajectory propagate_for_subset(const Scenario& scenario, RobotMask active,
                                          const PlanSet& plans) {
  std::vector<std::vector<RobotState>> trajectories;
  for (int id : mask_ids(active)) {
    trajectories.push_back(rollout(scenario, id, plans.sequences.at(id)));
  }
  const GaussianBelief prior{scenario.target_prior_mean, scenario.target_prior_cov};
  return riccati_propagate(prior, trajectories, scenario.target_model(), scenario.sensor,
                           scenario.horizon);
}

double info_gain(const Scenario& scenario, RobotMask active, const PlanSet& plans) {
  if (scenario.horizon == 0) return 0.0;
  return baseline_raw(scenario) - achieved_raw(scenario, active, plans);
}

SetFunctionView::SetFunctionView(const Scenario& scenario, PlanSet plans)
    : scenario_(&scenario), plans_(std::move(plans)) {
  if (scenario.num_robots() > 64) {
    throw EnumerationGuardError("SetFunctionView: at most 64 robots supported");
  }
}

double SetFunctionView::value(RobotMask subset) const {
  std::lock_guard<std::mutex> lock(mutex_);
  if (auto it = memo_.find(subset); it != memo_.end()) return it->second;
  if (!baseline_) baseline_ = baseline_raw(*scenario_);
  const double gain =
      scenario_->horizon == 0 ? 0.0 : *baseline_ - achieved_raw(*scenario_, subset, plans_);
  memo_.emplace(subset, gain);
  return gain;
}

SetFunctionView as_set_function(const Scenario& scenario, const PlanSet& plans) {
  return SetFunctionView(scenario, plans);
}

}  // namespace rig
