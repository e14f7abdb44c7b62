#include "rig/resilient.hpp"

#include <algorithm>

#include "rig/errors.hpp"
#include "rig/planning.hpp"

namespace rig {

std::map<int, SoloPlan> step1_marginals(const Scenario& scenario) {
  std::map<int, SoloPlan> solos;
  for (int id = 0; id < scenario.num_robots(); ++id) {
    SinglePlan sp = plan_single(scenario, id, PlanSet{});
    solos[id] = SoloPlan{std::move(sp.controls), sp.value};
  }
  return solos;
}

bool BaitSet::contains(int id) const {
  return std::binary_search(members.begin(), members.end(), id);
}

BaitSet step2_select_bait(const std::map<int, double>& marginals, int alpha) {
  const int n = static_cast<int>(marginals.size());
  if (alpha < 0 || alpha > n) throw DimensionError("step2_select_bait: alpha must be in [0, n]");

  std::vector<std::pair<int, double>> ranked(marginals.begin(), marginals.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  BaitSet bait;
  bait.marginals = marginals;
  const int take = std::min(alpha, n);
  for (int k = 0; k < take; ++k) bait.members.push_back(ranked[k].first);
  std::sort(bait.members.begin(), bait.members.end());
  return bait;
}

ResilientPlan algorithm1(const Scenario& scenario, int alpha, Step4Solver step4) {
  const int n = scenario.num_robots();
  if (alpha < 0 || alpha > n) throw DimensionError("algorithm1: alpha must be in [0, n]");

  // Step 1: solo problems, zero rounds.
  const auto solos = step1_marginals(scenario);
  std::map<int, double> marginals;
  for (const auto& [id, solo] : solos) marginals[id] = solo.marginal;

  // Step 2: bait selection, 2|V| rounds for the gather/broadcast.
  ResilientPlan result;
  result.alpha = alpha;
  result.bait = step2_select_bait(marginals, alpha);
  result.rounds = 2 * n;

  // Step 3: bait robots adopt their solo plans, zero rounds.
  for (int id : result.bait.members) result.plans.sequences[id] = solos.at(id).controls;

  // Step 4: the rest jointly solve P(V \ L, 0); one round per participant.
  std::vector<int> remaining;
  for (int id = 0; id < n; ++id) {
    if (!result.bait.contains(id)) remaining.push_back(id);
  }
  if (step4 == Step4Solver::CoordinateDescent) {
    CoordinateDescentPlan cd = coordinate_descent(scenario, remaining);
    for (auto& [id, seq] : cd.plans.sequences) result.plans.sequences[id] = std::move(seq);
    result.rounds += cd.rounds;
  } else {
    JointPlan joint = plan_joint_exhaustive(scenario, remaining);
    for (auto& [id, seq] : joint.plans.sequences) result.plans.sequences[id] = std::move(seq);
    result.rounds += static_cast<int>(remaining.size());
  }
  return result;
}

}  // namespace rig
