#include "rig/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include <Eigen/Cholesky>

#include "rig/errors.hpp"
#include "rig/estimation.hpp"
#include "rig/math_util.hpp"
#include "rig/objectives.hpp"
#include "rig/oracle.hpp"
#include "rig/planning.hpp"
#include "rig/random.hpp"
#include "rig/resilient.hpp"

namespace rig {

namespace {

constexpr int kExactAttackLimit = 12;

double log_det_llt(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("simulation: filter covariance lost positive definiteness");
  }
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

struct Measurement {
  int target = 0;
  double range = 0.0;
  double bearing = 0.0;
};

struct RobotMeasurementBlock {
  RobotState pose;
  std::vector<Measurement> measurements;
};

// EKF update from range-bearing measurements, linearized about the belief
// mean with bearing residuals wrapped.
GaussianBelief ekf_update(const GaussianBelief& belief,
                          const std::vector<RobotMeasurementBlock>& blocks,
                          const SensorParams& sensor) {
  int rows = 0;
  for (const auto& b : blocks) rows += 2 * static_cast<int>(b.measurements.size());
  if (rows == 0) return belief;

  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(rows, belief.mean.size());
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(rows, rows);
  Eigen::VectorXd innovation(rows);
  int at = 0;
  for (const auto& block : blocks) {
    for (const auto& z : block.measurements) {
      const Eigen::Vector4d y_hat = belief.mean.segment<4>(4 * z.target);
      const double dx = y_hat[0] - block.pose.x1;
      const double dy = y_hat[1] - block.pose.x2;
      const double r_hat = std::hypot(dx, dy);
      if (r_hat == 0.0) {
        throw SingularGeometryError("ekf_update: predicted mean coincides with robot");
      }
      const double b_hat = wrap_angle(std::atan2(dy, dx) - block.pose.theta);

      H.block<2, 4>(at, 4 * z.target) = measurement_jacobian(block.pose, y_hat);
      const double sr = range_noise_std(r_hat, sensor);
      const double sb = bearing_noise_std(b_hat, sensor);
      V(at, at) = sr * sr;
      V(at + 1, at + 1) = sb * sb;
      innovation[at] = z.range - r_hat;
      innovation[at + 1] = wrap_angle(z.bearing - b_hat);
      at += 2;
    }
  }
  return kf_update_with_innovation(belief, H, V, innovation);
}

void reflect_target(Eigen::Ref<Eigen::Vector4d> y, double side) {
  for (int d = 0; d < 2; ++d) {
    for (int guard = 0; guard < 8 && (y[d] < 0.0 || y[d] > side); ++guard) {
      if (y[d] < 0.0) {
        y[d] = -y[d];
        y[d + 2] = -y[d + 2];
      } else {
        y[d] = 2.0 * side - y[d];
        y[d + 2] = -y[d + 2];
      }
    }
    y[d] = std::clamp(y[d], 0.0, side);
  }
}

}  // namespace

const char* plan_mode_name(PlanMode mode) {
  return mode == PlanMode::Resilient ? "resilient" : "nonresilient";
}

double MetricsTimeline::step_rmse_mean(int t) const {
  const Eigen::MatrixXd& err = position_error.at(t);
  double sum = 0.0;
  for (int r = 0; r < err.rows(); ++r) {
    sum += std::sqrt(err.row(r).array().square().mean());
  }
  return sum / static_cast<double>(err.rows());
}

double MetricsTimeline::step_rmse_peak(int t) const {
  const Eigen::MatrixXd& err = position_error.at(t);
  double peak = 0.0;
  for (int r = 0; r < err.rows(); ++r) {
    peak = std::max(peak, std::sqrt(err.row(r).array().square().mean()));
  }
  return peak;
}

double MetricsTimeline::step_entropy_mean(int t) const { return entropy.at(t).mean(); }

TrialSummary summarize(const MetricsTimeline& timeline) {
  TrialSummary s;
  const int n = timeline.steps();
  if (n == 0) return s;
  for (int t = 0; t < n; ++t) {
    s.mean_rmse += timeline.step_rmse_mean(t);
    s.peak_rmse = std::max(s.peak_rmse, timeline.step_rmse_peak(t));
    s.mean_entropy += timeline.step_entropy_mean(t);
  }
  s.mean_rmse /= n;
  s.mean_entropy /= n;
  return s;
}

Scenario materialize_scenario(const Scenario& base, std::uint64_t seed) {
  Scenario s = base;
  RandomStream placement(seed, "placement");

  const bool place_targets = s.target_prior_mean.size() == 0;
  if (place_targets) {
    const int grid = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(s.num_targets))));
    const double lo = 0.2 * s.env_side;
    const double hi = 0.8 * s.env_side;
    const double pitch = grid > 1 ? (hi - lo) / (grid - 1) : 0.0;
    const double jitter = 0.05 * s.env_side;

    s.target_prior_mean = Eigen::VectorXd::Zero(s.state_dim());
    for (int m = 0; m < s.num_targets; ++m) {
      const int gx = m % grid;
      const int gy = m / grid;
      double y1 = (grid > 1 ? lo + gx * pitch : 0.5 * s.env_side) + placement.uniform(-jitter, jitter);
      double y2 = (grid > 1 ? lo + gy * pitch : 0.5 * s.env_side) + placement.uniform(-jitter, jitter);
      s.target_prior_mean[4 * m] = std::clamp(y1, 0.0, s.env_side);
      s.target_prior_mean[4 * m + 1] = std::clamp(y2, 0.0, s.env_side);
    }
  }
  if (s.target_prior_cov.size() == 0) {
    Eigen::VectorXd diag(s.state_dim());
    for (int m = 0; m < s.num_targets; ++m) {
      diag[4 * m] = diag[4 * m + 1] = s.prior_position_std * s.prior_position_std;
      diag[4 * m + 2] = diag[4 * m + 3] = s.prior_velocity_std * s.prior_velocity_std;
    }
    s.target_prior_cov = diag.asDiagonal();
  }

  if (s.robot_starts.empty()) {
    const int n = s.team_size;
    const double radius = 0.15 * s.env_side;
    const double cx = 0.5 * s.env_side;
    for (int r = 0; r < n; ++r) {
      const double angle = 2.0 * kPi * r / std::max(n, 1) + placement.uniform(-0.2, 0.2);
      RobotState pose;
      pose.x1 = std::clamp(cx + radius * std::cos(angle), 0.0, s.env_side);
      pose.x2 = std::clamp(cx + radius * std::sin(angle), 0.0, s.env_side);
      // Robots know the target prior; start facing the nearest believed target.
      double best_d = std::numeric_limits<double>::infinity();
      double to_target = 0.0;
      for (int m = 0; m < s.num_targets; ++m) {
        const double dx = s.target_prior_mean[4 * m] - pose.x1;
        const double dy = s.target_prior_mean[4 * m + 1] - pose.x2;
        const double d = std::hypot(dx, dy);
        if (d < best_d) {
          best_d = d;
          to_target = std::atan2(dy, dx);
        }
      }
      pose.theta = wrap_angle(to_target + placement.uniform(-0.3, 0.3));
      s.robot_starts.push_back(pose);
    }
  }

  // Keep robots off the target means so the measurement Jacobian stays defined.
  for (auto& pose : s.robot_starts) {
    for (int guard = 0; guard < 100; ++guard) {
      bool clear = true;
      for (int m = 0; m < s.num_targets; ++m) {
        const double d = std::hypot(s.target_prior_mean[4 * m] - pose.x1,
                                    s.target_prior_mean[4 * m + 1] - pose.x2);
        if (d < 0.5) {
          clear = false;
          break;
        }
      }
      if (clear) break;
      pose.x1 = std::clamp(pose.x1 + 0.731, 0.0, s.env_side);
      pose.x2 = std::clamp(pose.x2 + 0.417, 0.0, s.env_side);
    }
  }
  return s;
}

MetricsTimeline run_trial(const Scenario& base, std::uint64_t seed, PlanMode mode) {
  Scenario scenario = materialize_scenario(base, seed);
  scenario.validate();

  const int n = scenario.num_robots();
  const int num_targets = scenario.num_targets;
  const int horizon = scenario.horizon;
  const int phases = scenario.total_steps / horizon;
  const auto model = scenario.target_model();

  RandomStream init_stream(seed, "world-init");
  RandomStream process_stream(seed, "process");
  RandomStream measurement_stream(seed, "measurement");

  // True initial state: positions drawn from the prior, velocities zero.
  Eigen::VectorXd truth;
  {
    Eigen::LLT<Eigen::MatrixXd> llt(scenario.target_prior_cov);
    truth = scenario.target_prior_mean +
            Eigen::MatrixXd(llt.matrixL()) * init_stream.normal_vector(scenario.state_dim());
    for (int m = 0; m < num_targets; ++m) {
      truth[4 * m + 2] = 0.0;
      truth[4 * m + 3] = 0.0;
    }
    for (int m = 0; m < num_targets; ++m) {
      reflect_target(truth.segment<4>(4 * m), scenario.env_side);
    }
  }

  // Process noise sampling factor (identical block for every target).
  Eigen::Matrix4d noise_factor = Eigen::Matrix4d::Zero();
  if (scenario.process_noise_q > 0.0) {
    noise_factor = Eigen::Matrix4d(model.W.topLeftCorner<4, 4>()).llt().matrixL();
  }

  GaussianBelief fused{scenario.target_prior_mean, scenario.target_prior_cov};
  std::vector<GaussianBelief> beliefs(n, fused);
  std::vector<RobotState> poses = scenario.robot_starts;

  MetricsTimeline timeline;
  timeline.attack_exact = scenario.alpha == 0 || n <= kExactAttackLimit;
  timeline.position_error.reserve(scenario.total_steps);

  RobotMask active_team = full_mask(n);

  for (int phase = 0; phase < phases; ++phase) {
    // Plan for the robots still in the task; with the default rejoin policy
    // that is always the whole team.
    const std::vector<int> team_ids = mask_ids(active_team);
    const int team = static_cast<int>(team_ids.size());
    const int phase_alpha = std::min(scenario.alpha, team);

    RobotMask attacked = 0;
    std::map<int, const ControlSequence*> plan_of;  // by original robot id
    PlanSet sub_plans;
    if (team > 0) {
      Scenario phase_scenario = scenario;
      phase_scenario.robot_starts.clear();
      for (int id : team_ids) phase_scenario.robot_starts.push_back(poses[id]);
      phase_scenario.target_prior_mean = fused.mean;
      phase_scenario.target_prior_cov = fused.cov;
      phase_scenario.alpha = phase_alpha;

      if (mode == PlanMode::Resilient) {
        sub_plans = algorithm1(phase_scenario, phase_alpha).plans;
      } else {
        sub_plans = coordinate_descent(phase_scenario, ascending_order(team)).plans;
      }
      if (phase_alpha > 0) {
        SetFunctionView view(phase_scenario, sub_plans);
        const RobotMask sub_attacked =
            team <= kExactAttackLimit ? worst_case_attack(view, phase_alpha).attacked
                                      : greedy_attack(view, phase_alpha).attacked;
        for (int sub : mask_ids(sub_attacked)) attacked = mask_with(attacked, team_ids[sub]);
      }
      for (const auto& [sub, seq] : sub_plans.sequences) plan_of[team_ids[sub]] = &seq;
    }

    // Robots outside the phase: jammed this phase, or permanently removed.
    const RobotMask inactive = (full_mask(n) & ~active_team) | attacked;
    const std::vector<int> inactive_list = mask_ids(inactive);

    GaussianBelief central = fused;
    for (int id : team_ids) beliefs[id] = fused;

    for (int t = 0; t < horizon; ++t) {
      // World: targets evolve with sampled process noise, velocity reflected
      // at the environment bounds.
      for (int m = 0; m < num_targets; ++m) {
        Eigen::Vector4d y = model.A.block<4, 4>(4 * m, 4 * m) * truth.segment<4>(4 * m);
        if (scenario.process_noise_q > 0.0) {
          y += noise_factor * Eigen::Vector4d(process_stream.normal_vector(4));
        } else {
          process_stream.normal_vector(4);  // keep streams aligned across configs
        }
        truth.segment<4>(4 * m) = y;
        reflect_target(truth.segment<4>(4 * m), scenario.env_side);
      }

      // Survivors execute their plans open loop; inactive robots stay parked.
      for (int r = 0; r < n; ++r) {
        if (mask_contains(inactive, r)) continue;
        poses[r] = unicycle_step(poses[r], plan_of.at(r)->at(t), scenario.tau,
                                 scenario.paper_literal_unicycle);
      }

      // Measurements. Noise is drawn for every (robot, target) pair so the
      // world realization is identical across planner modes.
      std::vector<RobotMeasurementBlock> blocks(n);
      for (int r = 0; r < n; ++r) {
        blocks[r].pose = poses[r];
        for (int m = 0; m < num_targets; ++m) {
          const double noise_r = measurement_stream.normal();
          const double noise_b = measurement_stream.normal();
          if (mask_contains(inactive, r)) continue;
          const auto rb = observe(poses[r], truth.segment<4>(4 * m), scenario.sensor);
          if (!rb) continue;
          Measurement z;
          z.target = m;
          z.range =
              std::max(0.0, rb->range + noise_r * range_noise_std(rb->range, scenario.sensor));
          z.bearing =
              wrap_angle(rb->bearing + noise_b * bearing_noise_std(rb->bearing, scenario.sensor));
          blocks[r].measurements.push_back(z);
        }
      }

      // Per-robot filters on their own measurements; a central filter fuses
      // every survivor's measurements for the next phase boundary.
      for (int r = 0; r < n; ++r) {
        beliefs[r] = kf_predict(beliefs[r], model.A, model.W);
        if (!mask_contains(inactive, r) && !blocks[r].measurements.empty()) {
          beliefs[r] = ekf_update(beliefs[r], {blocks[r]}, scenario.sensor);
        }
      }
      central = kf_predict(central, model.A, model.W);
      std::vector<RobotMeasurementBlock> survivor_blocks;
      for (int r = 0; r < n; ++r) {
        if (!mask_contains(inactive, r)) survivor_blocks.push_back(blocks[r]);
      }
      central = ekf_update(central, survivor_blocks, scenario.sensor);

      // Metrics.
      Eigen::MatrixXd err(n, num_targets);
      Eigen::VectorXd entropy(n);
      double logdet_sum = 0.0;
      for (int r = 0; r < n; ++r) {
        for (int m = 0; m < num_targets; ++m) {
          err(r, m) = std::hypot(beliefs[r].mean[4 * m] - truth[4 * m],
                                 beliefs[r].mean[4 * m + 1] - truth[4 * m + 1]);
        }
        const double logdet = log_det_llt(beliefs[r].cov);
        const int dim = scenario.state_dim();
        entropy[r] = 0.5 * (dim * std::log(2.0 * kPi * std::exp(1.0)) + logdet) / num_targets;
        logdet_sum += logdet;
      }
      timeline.position_error.push_back(std::move(err));
      timeline.entropy.push_back(std::move(entropy));
      timeline.logdet_raw.push_back(logdet_sum / n);
      timeline.attacked_ids.push_back(inactive_list);
      timeline.truth.push_back(truth);
    }

    fused = central;
    if (scenario.permanent_removal) active_team &= ~attacked;
  }
  return timeline;
}

TrialSummary ExperimentResult::aggregate(PlanMode mode) const {
  TrialSummary agg;
  int count = 0;
  for (const auto& rec : trials) {
    if (rec.mode != mode) continue;
    agg.mean_rmse += rec.summary.mean_rmse;
    agg.peak_rmse += rec.summary.peak_rmse;
    agg.mean_entropy += rec.summary.mean_entropy;
    ++count;
  }
  if (count > 0) {
    agg.mean_rmse /= count;
    agg.peak_rmse /= count;
    agg.mean_entropy /= count;
  }
  return agg;
}

const TrialRecord* ExperimentResult::find(PlanMode mode, std::uint64_t seed) const {
  for (const auto& rec : trials) {
    if (rec.mode == mode && rec.seed == seed) return &rec;
  }
  return nullptr;
}

ExperimentResult run_experiment(const Scenario& scenario,
                                const std::vector<std::uint64_t>& seeds,
                                const std::vector<PlanMode>& modes, int threads) {
  ExperimentResult result;
  std::vector<std::pair<PlanMode, std::uint64_t>> tasks;
  for (PlanMode mode : modes) {
    for (std::uint64_t seed : seeds) tasks.emplace_back(mode, seed);
  }
  result.trials.resize(tasks.size());

  int workers = threads;
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, static_cast<int>(tasks.size() ? tasks.size() : 1));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) break;
      try {
        TrialRecord rec;
        rec.mode = tasks[i].first;
        rec.seed = tasks[i].second;
        rec.timeline = run_trial(scenario, rec.seed, rec.mode);
        rec.summary = summarize(rec.timeline);
        result.trials[i] = std::move(rec);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::sort(result.trials.begin(), result.trials.end(), [](const auto& a, const auto& b) {
    if (a.mode != b.mode) return static_cast<int>(a.mode) < static_cast<int>(b.mode);
    return a.seed < b.seed;
  });
  return result;
}

}  // namespace rig
