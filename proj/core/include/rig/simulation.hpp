#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "rig/scenario.hpp"

namespace rig {

enum class PlanMode { Resilient, NonResilient };

const char* plan_mode_name(PlanMode mode);

/// Per-step tracking metrics of one closed-loop trial.
struct MetricsTimeline {
  /// position_error[t](r, m): distance between robot r's estimated and true
  /// position of target m.
  std::vector<Eigen::MatrixXd> position_error;
  /// entropy[t][r]: robot r's Gaussian belief entropy averaged per target.
  std::vector<Eigen::VectorXd> entropy;
  /// Raw (un-normalized) log-det of the filter covariance, averaged over robots.
  std::vector<double> logdet_raw;
  std::vector<std::vector<int>> attacked_ids;
  /// True joint target state per step (simulation ground truth, not in CSVs).
  std::vector<Eigen::VectorXd> truth;
  bool attack_exact = true;  ///< false when the greedy attack heuristic ran

  int steps() const { return static_cast<int>(position_error.size()); }
  double step_rmse_mean(int t) const;
  double step_rmse_peak(int t) const;
  double step_entropy_mean(int t) const;
};

struct TrialSummary {
  double mean_rmse = 0.0;
  double peak_rmse = 0.0;
  double mean_entropy = 0.0;
};

TrialSummary summarize(const MetricsTimeline& timeline);

/// Fills in seeded placement (robot poses, target prior) when the scenario
/// template leaves them empty; explicit placement passes through unchanged.
Scenario materialize_scenario(const Scenario& base, std::uint64_t seed);

/// One closed-loop receding-horizon trial: per planning phase, plan with the
/// resilient or non-resilient planner, remove the worst-case attacked robots
/// for the duration of the phase, and let survivors execute their plans
/// open-loop while filtering their own measurements. Robots re-fuse to a
/// centrally filtered belief at phase boundaries, where attacked robots
/// rejoin. Deterministic given (scenario, seed, mode).
MetricsTimeline run_trial(const Scenario& scenario, std::uint64_t seed, PlanMode mode);

struct TrialRecord {
  PlanMode mode = PlanMode::Resilient;
  std::uint64_t seed = 0;
  MetricsTimeline timeline;
  TrialSummary summary;
};

struct ExperimentResult {
  std::vector<TrialRecord> trials;  ///< sorted by (mode, seed)

  TrialSummary aggregate(PlanMode mode) const;  ///< seed-order-free means
  const TrialRecord* find(PlanMode mode, std::uint64_t seed) const;
};

/// Runs trials for every (mode, seed) pair, in parallel when threads > 1.
/// threads == 0 picks the hardware concurrency.
ExperimentResult run_experiment(const Scenario& scenario,
                                const std::vector<std::uint64_t>& seeds,
                                const std::vector<PlanMode>& modes, int threads = 1);

}  // namespace rig
