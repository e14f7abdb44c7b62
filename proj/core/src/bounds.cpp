#include "rig/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "json.hpp"

#include "rig/errors.hpp"
#include "rig/math_util.hpp"
#include "rig/objectives.hpp"
#include "rig/planning.hpp"
#include "rig/resilient.hpp"

namespace rig {

namespace {

constexpr double kSlack = 1e-9;
constexpr double kTrivialValue = 1e-9;
constexpr double kCurvatureCoincidenceTol = 1e-12;

bool suite_enabled(const BoundsOptions& options, const std::string& family) {
  if (options.suites.empty()) return true;
  return std::find(options.suites.begin(), options.suites.end(), family) != options.suites.end();
}

}  // namespace

int BoundsReport::violations() const {
  int n = 0;
  for (const auto& c : checks) n += c.pass ? 0 : 1;
  return n;
}

int BoundsReport::count(const std::string& suite) const {
  int n = 0;
  for (const auto& c : checks) n += c.suite == suite ? 1 : 0;
  return n;
}

std::string BoundsReport::to_json() const {
  nlohmann::ordered_json j;
  j["violations"] = violations();
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  std::map<std::string, std::pair<int, int>> counts;  // suite -> (checked, passed)
  for (const auto& c : checks) {
    nlohmann::ordered_json rec;
    rec["suite"] = c.suite;
    rec["instance"] = c.instance;
    rec["achieved"] = c.achieved;
    rec["guaranteed"] = c.guaranteed;
    rec["margin"] = c.margin;
    rec["pass"] = c.pass;
    rec["flags"] = c.flags;
    arr.push_back(rec);
    auto& [checked, passed] = counts[c.suite];
    ++checked;
    passed += c.pass ? 1 : 0;
  }
  nlohmann::ordered_json summary;
  for (const auto& [suite, cp] : counts) {
    summary[suite] = {{"checked", cp.first}, {"passed", cp.second}};
  }
  j["suites"] = summary;
  j["checks"] = arr;
  return j.dump(2);
}

Scenario random_desk_scenario(RandomStream& rng, std::string* label) {
  Scenario s;
  s.env_side = 40.0;

  const int n = rng.uniform() < 0.5 ? 2 : 3;
  const int horizon = rng.uniform() < 0.5 ? 1 : 2;
  const int num_controls = rng.uniform() < 0.5 ? 2 : 3;
  s.alpha = (n == 2 || rng.uniform() < 0.6) ? 1 : 2;
  s.num_targets = rng.uniform() < 0.8 ? 1 : 2;
  s.horizon = horizon;
  s.total_steps = horizon;

  s.sensor.range = rng.uniform(4.0, 10.0);
  const double fov_pick = rng.uniform();
  if (fov_pick < 0.3) {
    s.sensor.fov = 2.0 * kPi;
  } else if (fov_pick < 0.8) {
    s.sensor.fov = deg_to_rad(rng.uniform(100.0, 200.0));
  } else {
    s.sensor.fov = deg_to_rad(rng.uniform(60.0, 100.0));
  }
  s.sensor.sigma_range = rng.uniform(0.1, 0.6);
  // Half the instances get a nearly-useless bearing, which makes pairs of
  // robots complementary (triangulation) and drives submodularity failures.
  s.sensor.sigma_bearing =
      rng.uniform() < 0.5 ? deg_to_rad(rng.uniform(2.0, 10.0)) : rng.uniform(0.5, 1.6);

  s.tau = 0.5;
  const double q_pick = rng.uniform();
  s.process_noise_q = q_pick < 0.4 ? 0.001 : (q_pick < 0.8 ? 0.01 : 0.05);
  s.objective = rng.uniform() < 0.6 ? ObjectiveKind::LogDetGain : ObjectiveKind::TraceGain;

  s.target_prior_mean = Eigen::VectorXd::Zero(4 * s.num_targets);
  Eigen::VectorXd prior_diag(4 * s.num_targets);
  for (int m = 0; m < s.num_targets; ++m) {
    s.target_prior_mean[4 * m] = rng.uniform(15.0, 25.0);
    s.target_prior_mean[4 * m + 1] = rng.uniform(15.0, 25.0);
    const double pos_var = std::pow(rng.uniform(1.0, 3.0), 2);
    const double vel_var = std::pow(rng.uniform(0.05, 0.4), 2);
    prior_diag[4 * m] = prior_diag[4 * m + 1] = pos_var;
    prior_diag[4 * m + 2] = prior_diag[4 * m + 3] = vel_var;
  }
  s.target_prior_cov = prior_diag.asDiagonal();

  for (int r = 0; r < n; ++r) {
    const int anchor = static_cast<int>(rng.uniform_index(s.num_targets));
    const double ax = s.target_prior_mean[4 * anchor];
    const double ay = s.target_prior_mean[4 * anchor + 1];
    const double d = rng.uniform(1.0, 1.3 * s.sensor.range);
    const double angle = rng.uniform(-kPi, kPi);
    RobotState pose;
    pose.x1 = std::clamp(ax + d * std::cos(angle), 0.0, s.env_side);
    pose.x2 = std::clamp(ay + d * std::sin(angle), 0.0, s.env_side);
    const double to_target = std::atan2(ay - pose.x2, ax - pose.x1);
    pose.theta = wrap_angle(rng.uniform() < 0.6 ? to_target + rng.uniform(-0.6, 0.6)
                                                : rng.uniform(-kPi, kPi));
    s.robot_starts.push_back(pose);
  }

  static const std::vector<ControlInput> pool = {{1, 0},  {1, 1},  {1, -1}, {1, 3},  {1, -3},
                                                 {3, 0},  {3, 1},  {3, -1}, {2, 2},  {2, -2}};
  std::vector<int> picks;
  while (static_cast<int>(picks.size()) < num_controls) {
    const int c = static_cast<int>(rng.uniform_index(pool.size()));
    if (std::find(picks.begin(), picks.end(), c) == picks.end()) picks.push_back(c);
  }
  for (int c : picks) s.control_set.push_back(pool[c]);

  s.planner.mode = PlannerMode::Exhaustive;
  s.planner.max_expansions = 1'000'000;
  s.seeds = {1};

  if (label) {
    std::ostringstream os;
    os << "V=" << n << " T=" << horizon << " U=" << num_controls << " M=" << s.num_targets
       << " alpha=" << s.alpha
       << " obj=" << (s.objective == ObjectiveKind::LogDetGain ? "logdet" : "trace");
    *label = os.str();
  }
  return s;
}

InstanceClass classify_instance(const Scenario& scenario) {
  InstanceClass cls;
  cls.kappa = 0.0;
  cls.kappa_defined = true;

  const int n = scenario.num_robots();
  const std::size_t num_controls = scenario.control_set.size();
  std::vector<std::size_t> digits(static_cast<std::size_t>(n) * scenario.horizon, 0);
  bool more = true;
  while (more) {
    PlanSet plans;
    for (int r = 0; r < n; ++r) {
      ControlSequence seq;
      for (int t = 0; t < scenario.horizon; ++t) {
        seq.push_back(
            scenario.control_set[digits[static_cast<std::size_t>(r) * scenario.horizon + t]]);
      }
      plans.sequences[r] = std::move(seq);
    }
    const auto table = EnumeratedSetFunction::tabulate(SetFunctionView(scenario, plans));
    ++cls.assignments;

    if (!is_monotone(table)) cls.monotone = false;
    const bool view_submodular = is_submodular(table);
    if (!view_submodular) cls.submodular = false;

    if (cls.monotone) {
      cls.total_c = std::max(cls.total_c, total_curvature(table));
      if (view_submodular && cls.kappa_defined) {
        try {
          cls.kappa = std::max(cls.kappa, curvature(table));
        } catch (const NotInClassError&) {
          cls.kappa_defined = false;  // zero singleton somewhere: fall back to 1/(1+alpha)
        }
      }
    }

    more = false;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
      if (++*it < num_controls) {
        more = true;
        break;
      }
      *it = 0;
    }
  }
  if (!cls.submodular) cls.kappa_defined = false;
  return cls;
}

EnumeratedSetFunction random_coverage_function(int n, RandomStream& rng) {
  const int items = n + static_cast<int>(rng.uniform_index(2 * n));
  std::vector<std::uint64_t> covers(n, 0);
  std::vector<double> weights(items);
  for (double& w : weights) w = rng.uniform(0.1, 1.0);
  for (int v = 0; v < n; ++v) {
    for (int k = 0; k < items; ++k) {
      if (rng.uniform() < 0.4) covers[v] |= std::uint64_t{1} << k;
    }
    if (covers[v] == 0) covers[v] |= std::uint64_t{1} << rng.uniform_index(items);
  }
  std::vector<double> table(std::size_t{1} << n, 0.0);
  for (RobotMask m = 1; m < table.size(); ++m) {
    std::uint64_t covered = 0;
    for (int v : mask_ids(m)) covered |= covers[v];
    double total = 0.0;
    for (int k = 0; k < items; ++k) {
      if ((covered >> k) & 1u) total += weights[k];
    }
    table[m] = total;
  }
  return EnumeratedSetFunction(n, std::move(table));
}

EnumeratedSetFunction random_monotone_lattice_function(int n, RandomStream& rng) {
  // Every marginal is at least 0.01, so total curvature is informative;
  // increments are independent, so submodularity generally fails.
  std::vector<double> table(std::size_t{1} << n, 0.0);
  for (RobotMask m = 1; m < table.size(); ++m) {
    double floor = 0.0;
    for (int v : mask_ids(m)) floor = std::max(floor, table[mask_without(m, v)]);
    table[m] = floor + rng.uniform(0.01, 1.0);
  }
  return EnumeratedSetFunction(n, std::move(table));
}

EnumeratedSetFunction random_modular_function(int n, RandomStream& rng) {
  std::vector<double> weights(n);
  for (double& w : weights) w = rng.uniform(0.1, 1.0);
  std::vector<double> table(std::size_t{1} << n, 0.0);
  for (RobotMask m = 1; m < table.size(); ++m) {
    double total = 0.0;
    for (int v : mask_ids(m)) total += weights[v];
    table[m] = total;
  }
  return EnumeratedSetFunction(n, std::move(table));
}

namespace {

void run_scenario_suites(const BoundsOptions& options, BoundsReport& report) {
  const bool want_attack_bound = suite_enabled(options, "attack-bound");
  const bool want_descent_bound = suite_enabled(options, "descent-bound");
  const bool want_cd_optimum = suite_enabled(options, "cd-optimum");
  if (!want_attack_bound && !want_descent_bound && !want_cd_optimum) return;

  RandomStream rng(options.seed, "instances");
  int submodular_done = 0;
  int monotone_done = 0;
  const int max_attempts = 80 * options.instances;

  for (int attempt = 0;
       attempt < max_attempts &&
       (submodular_done < options.instances || monotone_done < options.instances);
       ++attempt) {
    std::string label;
    const Scenario scenario = random_desk_scenario(rng, &label);
    label += " draw=" + std::to_string(attempt);

    const InstanceClass cls = classify_instance(scenario);
    if (!cls.monotone) continue;  // outside every bound family (float-degenerate)
    const bool family_submodular = cls.submodular;
    if (family_submodular && submodular_done >= options.instances) continue;
    if (!family_submodular && monotone_done >= options.instances) continue;

    const int n = scenario.num_robots();
    const int alpha = scenario.alpha;
    const MaxMinResult maxmin = exhaustive_maxmin(scenario, alpha);
    const double j_star = maxmin.value;
    // Degenerate instances (nothing observable survives the attack budget)
    // are recorded with a flag but do not count toward the quota.
    const bool instance_trivial = j_star <= kTrivialValue;

    const auto ratio_record = [&](const std::string& suite, double achieved_ratio,
                                  double guaranteed, bool trivial) {
      BoundCheckRecord rec;
      rec.suite = suite;
      rec.instance = label;
      rec.guaranteed = guaranteed * options.inflate_guarantees;
      if (trivial) {
        rec.achieved = 0.0;
        rec.margin = 0.0;
        rec.pass = true;
        rec.flags.push_back("trivial_jstar");
      } else {
        rec.achieved = achieved_ratio;
        rec.margin = achieved_ratio - rec.guaranteed;
        rec.pass = achieved_ratio >= rec.guaranteed - kSlack;
      }
      if (!cls.kappa_defined && family_submodular) rec.flags.push_back("kappa_undefined");
      report.checks.push_back(std::move(rec));
    };

    if (want_attack_bound) {
      const ResilientPlan plan = algorithm1(scenario, alpha, Step4Solver::ExhaustiveJoint);
      const SetFunctionView view(scenario, plan.plans);
      const AttackReport attack = worst_case_attack(view, alpha);
      const bool trivial = j_star <= kTrivialValue;
      const double ratio = trivial ? 0.0 : attack.degraded_value / j_star;
      if (family_submodular) {
        const double kappa_part = cls.kappa_defined ? 1.0 - cls.kappa : 0.0;
        ratio_record("attack_bound_submodular", ratio,
                     std::max(kappa_part, 1.0 / (1.0 + alpha)), trivial);
      } else {
        ratio_record("attack_bound_monotone", ratio, std::pow(1.0 - cls.total_c, 2), trivial);
      }
    }

    if (want_descent_bound) {
      const ResilientPlan plan = algorithm1(scenario, alpha, Step4Solver::CoordinateDescent);
      const SetFunctionView view(scenario, plan.plans);
      const bool trivial = j_star <= kTrivialValue;
      const double ratio = trivial ? 0.0 : view.value(full_mask(n)) / j_star;
      if (family_submodular) {
        const double kappa_part = cls.kappa_defined ? 1.0 - cls.kappa : 0.0;
        ratio_record("descent_bound_submodular", ratio,
                     0.5 * std::max(kappa_part, 1.0 / (1.0 + alpha)), trivial);
      } else {
        ratio_record("descent_bound_monotone", ratio, 0.5 * std::pow(1.0 - cls.total_c, 3),
                     trivial);
      }

      // Communication-round ledger: exact equality, not just the 3|V| bound.
      // The inflate hook scales this formula too, so a self-test run trips
      // deterministically.
      BoundCheckRecord rounds;
      rounds.suite = "rounds";
      rounds.instance = label;
      rounds.achieved = plan.rounds;
      rounds.guaranteed = (2 * n + (n - static_cast<int>(plan.bait.members.size()))) *
                          options.inflate_guarantees;
      rounds.margin = rounds.achieved - rounds.guaranteed;
      rounds.pass = plan.rounds == rounds.guaranteed && plan.rounds <= 3 * n;
      report.checks.push_back(std::move(rounds));
    }

    if (want_cd_optimum) {
      const CoordinateDescentPlan cd = coordinate_descent(scenario, ascending_order(n));
      const double j_cd = info_gain(scenario, full_mask(n), cd.plans);
      const double joint_opt = exhaustive_maxmin(scenario, 0).value;
      const bool trivial = joint_opt <= kTrivialValue;
      const double ratio = trivial ? 0.0 : j_cd / joint_opt;
      if (family_submodular) {
        ratio_record("cd_optimum_submodular", ratio, 0.5, trivial);
      } else {
        ratio_record("cd_optimum_monotone", ratio, 0.5 * (1.0 - cls.total_c), trivial);
      }
    }

    if (!instance_trivial) {
      if (family_submodular) {
        ++submodular_done;
      } else {
        ++monotone_done;
      }
    }
  }
}

void run_lemma_suite(const BoundsOptions& options, BoundsReport& report) {
  if (!suite_enabled(options, "lemmas")) return;
  RandomStream rng(options.seed, "lemmas");

  const auto record_lemmas = [&](const EnumeratedSetFunction& f, const std::string& generator,
                                 int index) {
    const LemmaReport lemma_report = check_lemmas(f);
    for (const auto& res : lemma_report.results) {
      if (res.status == LemmaStatus::NotInClass) continue;  // hypothesis gating
      BoundCheckRecord rec;
      rec.suite = "lemmas_" + res.name;
      rec.instance = generator + " #" + std::to_string(index);
      rec.pass = res.status == LemmaStatus::Pass;
      if (!rec.pass) rec.flags.push_back("counterexample " + res.detail);
      report.checks.push_back(std::move(rec));
    }
  };

  for (int i = 0; i < options.instances; ++i) {
    const EnumeratedSetFunction f = i % 10 == 9 ? random_modular_function(5, rng)
                                                : random_coverage_function(5, rng);
    record_lemmas(f, i % 10 == 9 ? "modular n=5" : "coverage n=5", i);

    // Monotone-submodular instances must have coinciding curvature notions.
    BoundCheckRecord rec;
    rec.suite = "curvature_coincidence";
    rec.instance = (i % 10 == 9 ? "modular n=5 #" : "coverage n=5 #") + std::to_string(i);
    try {
      rec.achieved = std::abs(curvature(f) - total_curvature(f));
      rec.guaranteed = kCurvatureCoincidenceTol;
      rec.margin = rec.guaranteed - rec.achieved;
      rec.pass = rec.achieved <= kCurvatureCoincidenceTol;
    } catch (const NotInClassError& e) {
      rec.pass = true;
      rec.flags.push_back(std::string("kappa_undefined: ") + e.what());
    }
    report.checks.push_back(std::move(rec));
  }
  for (int i = 0; i < options.instances; ++i) {
    record_lemmas(random_monotone_lattice_function(5, rng), "lattice n=5", i);
  }
}

}  // namespace

BoundsReport run_bound_suites(const BoundsOptions& options) {
  if (options.instances < 1) throw ConfigError("verify-bounds: instances must be >= 1");
  for (const auto& suite : options.suites) {
    if (suite != "attack-bound" && suite != "descent-bound" && suite != "cd-optimum" &&
        suite != "lemmas") {
      throw ConfigError("verify-bounds: unknown suite '" + suite + "'");
    }
  }
  BoundsReport report;
  run_scenario_suites(options, report);
  run_lemma_suite(options, report);
  return report;
}

}  // namespace rig
