#include <benchmark/benchmark.h>

#include "rig/estimation.hpp"
#include "rig/math_util.hpp"
#include "rig/objectives.hpp"
#include "rig/oracle.hpp"
#include "rig/planning.hpp"
#include "rig/random.hpp"
#include "rig/resilient.hpp"
#include "rig/simulation.hpp"

namespace {

using namespace rig;

Scenario tracking_scenario(int robots, int targets, int horizon) {
  Scenario s;
  s.env_side = 28.0;
  s.team_size = robots;
  s.num_targets = targets;
  s.prior_position_std = 2.0;
  s.prior_velocity_std = 0.2;
  s.sensor = SensorParams{10.0, deg_to_rad(94.0), 0.15, deg_to_rad(5.0)};
  s.tau = 0.5;
  s.process_noise_q = 0.002;
  s.horizon = horizon;
  s.total_steps = horizon;
  s.alpha = 2;
  s.control_set = {{1.0, 0.0}, {1.0, 1.0}, {1.0, -1.0}, {1.0, 3.0}, {1.0, -3.0},
                   {3.0, 0.0}, {3.0, 1.0}, {3.0, -1.0}, {3.0, 3.0}, {3.0, -3.0}};
  s.planner.mode = PlannerMode::GreedyPerStep;
  return materialize_scenario(s, 1);
}

void BM_JosephStep(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  RandomStream rng(1, "bench-joseph");
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim * dim; ++i) a(i / dim, i % dim) = rng.normal();
  const Eigen::MatrixXd cov = a * a.transpose() + Eigen::MatrixXd::Identity(dim, dim);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim / 2, dim);
  for (int i = 0; i < dim / 2; ++i) h(i, 2 * i) = 1.0;
  const Eigen::MatrixXd v = 0.1 * Eigen::MatrixXd::Identity(dim / 2, dim / 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(joseph_step(cov, h, v));
  }
}
BENCHMARK(BM_JosephStep)->Arg(8)->Arg(40);

void BM_RiccatiPropagate(benchmark::State& state) {
  const Scenario s = tracking_scenario(5, static_cast<int>(state.range(0)), 10);
  PlanSet plans;
  for (int r = 0; r < s.num_robots(); ++r) {
    plans.sequences[r] = ControlSequence(s.horizon, s.control_set[r % s.control_set.size()]);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate_for_subset(s, full_mask(s.num_robots()), plans));
  }
}
BENCHMARK(BM_RiccatiPropagate)->Arg(2)->Arg(10);

void BM_PlanSingleGreedy(benchmark::State& state) {
  const Scenario s = tracking_scenario(5, 10, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(plan_single(s, 0, PlanSet{}));
  }
}
BENCHMARK(BM_PlanSingleGreedy)->Arg(10)->Arg(25);

void BM_WorstCaseAttack(benchmark::State& state) {
  const Scenario s = tracking_scenario(5, 4, 5);
  const CoordinateDescentPlan cd = coordinate_descent(s, ascending_order(s.num_robots()));
  for (auto _ : state) {
    SetFunctionView view(s, cd.plans);
    benchmark::DoNotOptimize(worst_case_attack(view, 2));
  }
}
BENCHMARK(BM_WorstCaseAttack);

void BM_Algorithm1(benchmark::State& state) {
  const Scenario s = tracking_scenario(5, 4, 10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(algorithm1(s, 2));
  }
}
BENCHMARK(BM_Algorithm1);

void BM_RunTrial(benchmark::State& state) {
  Scenario s = tracking_scenario(3, 3, 5);
  s.total_steps = 20;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_trial(s, 1, PlanMode::Resilient));
  }
}
BENCHMARK(BM_RunTrial);

}  // namespace

BENCHMARK_MAIN();
