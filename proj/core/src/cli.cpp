#include "rig/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rig/bounds.hpp"
#include "rig/config.hpp"
#include "rig/errors.hpp"
#include "rig/objectives.hpp"
#include "rig/output.hpp"
#include "rig/planning.hpp"
#include "rig/resilient.hpp"
#include "rig/simulation.hpp"
#include "rig/version.hpp"

namespace rig::cli {

namespace {

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> items;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::vector<std::uint64_t> parse_seeds_arg(const std::string& arg) {
  std::vector<std::uint64_t> seeds;
  const auto items = split_csv(arg);
  if (items.empty()) throw ConfigError("--seeds: empty value");
  const auto to_u64 = [](const std::string& s) {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw ConfigError("--seeds: bad integer '" + s + "'");
    return static_cast<std::uint64_t>(v);
  };
  if (items.size() == 1 && arg.find(',') == std::string::npos) {
    const std::uint64_t count = to_u64(items.front());
    if (count == 0) throw ConfigError("--seeds: count must be positive");
    for (std::uint64_t s = 1; s <= count; ++s) seeds.push_back(s);
    return seeds;
  }
  for (const auto& item : items) seeds.push_back(to_u64(item));
  return seeds;
}

int resolve_threads(int flag_value) {
  if (const char* env = std::getenv("RIG_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
      // fall through to the flag
    }
  }
  return flag_value;
}

}  // namespace

int cmd_simulate(const SimulateArgs& args) {
  RunConfig config;
  try {
    config = load_config(args.config_path);
    if (args.modes) {
      config.modes.clear();
      for (const auto& name : split_csv(*args.modes)) config.modes.push_back(parse_plan_mode(name));
      if (config.modes.empty()) throw ConfigError("--modes: empty value");
    }
    if (args.seeds) config.scenario.seeds = parse_seeds_arg(*args.seeds);
  } catch (const ConfigError& e) {
    std::cerr << "rig simulate: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const std::filesystem::path out_dir(args.out_dir);
    std::filesystem::create_directories(out_dir);
    if (args.plots) std::filesystem::create_directories(out_dir / "plots");

    Manifest manifest;
    manifest.tool = kToolName;
    manifest.version = kToolVersion;
    manifest.config_hash = config_hash(config);
    manifest.seeds = config.scenario.seeds;
    for (PlanMode m : config.modes) manifest.modes.push_back(plan_mode_name(m));
    const int team = config.scenario.robot_starts.empty()
                         ? config.scenario.team_size
                         : config.scenario.num_robots();
    manifest.attack_oracle = (config.scenario.alpha == 0 || team <= 12) ? "exact" : "greedy";
    manifest.dry_run = args.dry_run;
    for (PlanMode mode : config.modes) {
      for (std::uint64_t seed : config.scenario.seeds) {
        manifest.outputs.push_back(timeline_csv_name(mode, seed));
      }
    }
    manifest.outputs.push_back("summary.csv");
    if (args.plots) {
      manifest.outputs.push_back("plots/rmse.svg");
      manifest.outputs.push_back("plots/entropy.svg");
    }
    write_manifest(out_dir / "manifest.json", manifest);
    if (args.dry_run) return kExitOk;

    const ExperimentResult result = run_experiment(config.scenario, config.scenario.seeds,
                                                   config.modes, resolve_threads(args.threads));
    for (const auto& rec : result.trials) {
      write_timeline_csv(out_dir / timeline_csv_name(rec.mode, rec.seed), rec.timeline);
    }
    write_summary_csv(out_dir / "summary.csv", result, config.modes);

    if (args.plots) {
      const int steps = config.scenario.total_steps;
      const int num_seeds = static_cast<int>(config.scenario.seeds.size());
      std::map<std::string, Eigen::MatrixXd> rmse, entropy;
      for (PlanMode mode : config.modes) {
        Eigen::MatrixXd r(num_seeds, steps), e(num_seeds, steps);
        int row = 0;
        for (std::uint64_t seed : config.scenario.seeds) {
          const TrialRecord* rec = result.find(mode, seed);
          for (int t = 0; t < steps; ++t) {
            r(row, t) = rec->timeline.step_rmse_mean(t);
            e(row, t) = rec->timeline.step_entropy_mean(t);
          }
          ++row;
        }
        rmse[plan_mode_name(mode)] = std::move(r);
        entropy[plan_mode_name(mode)] = std::move(e);
      }
      write_metric_svg(out_dir / "plots" / "rmse.svg", "position RMSE per target", rmse);
      write_metric_svg(out_dir / "plots" / "entropy.svg", "average entropy per target", entropy);
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "rig simulate: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int cmd_verify_bounds(const VerifyBoundsArgs& args) {
  BoundsOptions options;
  options.instances = args.instances;
  options.seed = args.seed;
  options.inflate_guarantees = args.inflate_guarantees;
  if (args.suites) options.suites = split_csv(*args.suites);

  try {
    const std::filesystem::path out_dir(args.out_dir);
    std::filesystem::create_directories(out_dir);
    const BoundsReport report = run_bound_suites(options);
    {
      std::ofstream out(out_dir / "bounds_report.json", std::ios::binary);
      if (!out) throw ConfigError("cannot write bounds_report.json");
      out << report.to_json() << "\n";
    }

    std::map<std::string, std::pair<int, int>> counts;
    for (const auto& c : report.checks) {
      auto& [checked, passed] = counts[c.suite];
      ++checked;
      passed += c.pass ? 1 : 0;
    }
    for (const auto& [suite, cp] : counts) {
      std::cout << suite << ": " << cp.second << "/" << cp.first << " passed\n";
    }
    if (report.violations() > 0) {
      for (const auto& c : report.checks) {
        if (c.pass) continue;
        std::cerr << "VIOLATION " << c.suite << " [" << c.instance
                  << "] achieved=" << c.achieved << " guaranteed=" << c.guaranteed << "\n";
      }
      return kExitViolation;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "rig verify-bounds: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "rig verify-bounds: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int cmd_plan(const PlanArgs& args) {
  RunConfig config;
  PlanMode mode;
  try {
    config = load_config(args.config_path);
    mode = parse_plan_mode(args.mode);
    if (args.alpha) {
      if (*args.alpha < 0) throw ConfigError("--alpha must be >= 0");
      config.scenario.alpha = *args.alpha;
    }
  } catch (const ConfigError& e) {
    std::cerr << "rig plan: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const std::uint64_t seed = config.scenario.seeds.empty() ? 1 : config.scenario.seeds.front();
    const Scenario scenario = materialize_scenario(config.scenario, seed);
    scenario.validate();

    nlohmann::ordered_json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["mode"] = plan_mode_name(mode);
    j["alpha"] = scenario.alpha;
    j["seed"] = seed;

    PlanSet plans;
    if (mode == PlanMode::Resilient) {
      const ResilientPlan plan = algorithm1(scenario, scenario.alpha);
      plans = plan.plans;
      j["rounds"] = plan.rounds;
      j["bait"] = plan.bait.members;
      nlohmann::ordered_json marginals;
      for (const auto& [id, q] : plan.bait.marginals) marginals[std::to_string(id)] = q;
      j["marginals"] = marginals;
    } else {
      const CoordinateDescentPlan plan =
          coordinate_descent(scenario, ascending_order(scenario.num_robots()));
      plans = plan.plans;
      j["rounds"] = plan.rounds;
    }
    j["value"] = info_gain(scenario, full_mask(scenario.num_robots()), plans);

    nlohmann::ordered_json robots = nlohmann::ordered_json::array();
    for (const auto& [id, seq] : plans.sequences) {
      nlohmann::ordered_json r;
      r["id"] = id;
      nlohmann::ordered_json controls = nlohmann::ordered_json::array();
      for (const auto& u : seq) controls.push_back({u.nu, u.omega});
      r["controls"] = controls;
      robots.push_back(r);
    }
    j["plans"] = robots;

    if (args.out_path == "-") {
      std::cout << j.dump(2) << "\n";
    } else {
      std::ofstream out(args.out_path, std::ios::binary);
      if (!out) throw ConfigError("cannot write '" + args.out_path + "'");
      out << j.dump(2) << "\n";
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "rig plan: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"resilient multi-robot information gathering"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "run receding-horizon tracking experiments");
  simulate->add_option("--config", sim.config_path, "scenario config file (.toml-style or .json)")
      ->required();
  simulate->add_option("--out", sim.out_dir, "output directory");
  std::string modes_csv, seeds_arg;
  simulate->add_option("--modes", modes_csv, "comma list: resilient,nonresilient");
  simulate->add_option("--seeds", seeds_arg, "seed count N (runs 1..N) or comma list");
  simulate->add_option("--threads", sim.threads, "worker threads (RIG_THREADS overrides)");
  simulate->add_flag("--dry-run", sim.dry_run, "write the manifest only");
  simulate->add_flag("--plots", sim.plots, "emit SVG band plots");

  VerifyBoundsArgs vb;
  auto* verify = app.add_subcommand("verify-bounds", "machine-check the approximation bounds");
  verify->add_option("--out", vb.out_dir, "output directory for bounds_report.json");
  verify->add_option("--instances", vb.instances, "instances per suite");
  verify->add_option("--seed", vb.seed, "instance generator seed");
  std::string suites_csv;
  verify->add_option("--suites", suites_csv,
                     "comma list of attack-bound,descent-bound,cd-optimum,lemmas (default all)");
  verify
      ->add_option("--inflate-guarantees", vb.inflate_guarantees,
                   "self-test hook: scale every guaranteed ratio")
      ->group("");  // hidden

  PlanArgs plan;
  auto* plan_cmd = app.add_subcommand("plan", "one-shot planner dump as JSON");
  plan_cmd->add_option("--config", plan.config_path, "scenario config file")->required();
  int alpha_flag = -1;
  plan_cmd->add_option("--alpha", alpha_flag, "override the attack budget");
  plan_cmd->add_option("--mode", plan.mode, "resilient or nonresilient");
  plan_cmd->add_option("--out", plan.out_path, "output file, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (simulate->parsed()) {
    if (!modes_csv.empty()) sim.modes = modes_csv;
    if (!seeds_arg.empty()) sim.seeds = seeds_arg;
    return cmd_simulate(sim);
  }
  if (verify->parsed()) {
    if (!suites_csv.empty()) vb.suites = suites_csv;
    return cmd_verify_bounds(vb);
  }
  if (plan_cmd->parsed()) {
    if (alpha_flag >= 0) plan.alpha = alpha_flag;
    return cmd_plan(plan);
  }
  return kExitConfig;
}

}  // namespace rig::cli
