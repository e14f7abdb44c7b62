#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"

#include "rig/cli.hpp"
#include "rig/config.hpp"
#include "rig/errors.hpp"
#include "rig/math_util.hpp"
#include "rig/output.hpp"

using namespace rig;

namespace {

const char* kValidConfig = R"(
# tracking experiment
[environment]
side_m = 30.0

[team]
count = 2

[targets]
count = 2
prior_pos_std_m = 2.0
prior_vel_std_mps = 0.2

[sensor]
range_m = 10.0
fov_deg = 94.0
sigma_range_m = 0.15
sigma_bearing_deg = 5.0

[dynamics]
tau_s = 0.5
process_noise_q = 0.002
speeds_mps = [1.0, 3.0]
turn_rates_radps = [0.0, 1.0, -1.0]

[planner]
mode = "greedy"
max_expansions = 50000

[run]
horizon_steps = 5
total_steps = 10
alpha = 1
objective = "logdet"
seeds = [1, 2]
modes = ["resilient", "nonresilient"]
)";

std::filesystem::path write_temp(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path, std::ios::binary);
  out << body;
  return path;
}

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

std::set<std::string> files_in(const std::filesystem::path& dir) {
  std::set<std::string> names;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) {
      names.insert(std::filesystem::relative(entry.path(), dir).generic_string());
    }
  }
  return names;
}

}  // namespace

TEST_CASE("config parsing resolves fields and converts degrees once") {
  const RunConfig config = parse_config_text(kValidConfig);
  const Scenario& s = config.scenario;
  CHECK(s.env_side == 30.0);
  CHECK(s.team_size == 2);
  CHECK(s.num_targets == 2);
  CHECK(s.sensor.fov == doctest::Approx(deg_to_rad(94.0)).epsilon(1e-15));
  CHECK(s.sensor.sigma_bearing == doctest::Approx(deg_to_rad(5.0)).epsilon(1e-15));
  CHECK(s.control_set.size() == 6);  // speed-major cross product
  CHECK(s.control_set[0] == ControlInput{1.0, 0.0});
  CHECK(s.control_set[3] == ControlInput{3.0, 0.0});
  CHECK(s.planner.mode == PlannerMode::GreedyPerStep);
  CHECK(s.planner.max_expansions == 50000);
  CHECK(s.seeds == std::vector<std::uint64_t>{1, 2});
  REQUIRE(config.modes.size() == 2);
  CHECK(config.modes[0] == PlanMode::Resilient);
}

TEST_CASE("config rejects bad input") {
  SUBCASE("unknown key") {
    CHECK_THROWS_AS(parse_config_text(replace_once(kValidConfig, "side_m", "side_banana")),
                    ConfigError);
  }
  SUBCASE("unknown section") {
    CHECK_THROWS_AS(parse_config_text(std::string(kValidConfig) + "\n[extras]\nfoo = 1\n"),
                    ConfigError);
  }
  SUBCASE("duplicate key") {
    CHECK_THROWS_AS(
        parse_config_text(replace_once(kValidConfig, "side_m = 30.0", "side_m = 30.0\nside_m = 31.0")),
        ConfigError);
  }
  SUBCASE("both degree and radian variants") {
    CHECK_THROWS_AS(
        parse_config_text(replace_once(kValidConfig, "fov_deg = 94.0", "fov_deg = 94.0\nfov_rad = 1.0")),
        ConfigError);
  }
  SUBCASE("bad mode string") {
    CHECK_THROWS_AS(parse_config_text(replace_once(kValidConfig, "\"greedy\"", "\"magic\"")),
                    ConfigError);
  }
  SUBCASE("bad number") {
    CHECK_THROWS_AS(parse_config_text(replace_once(kValidConfig, "30.0", "thirty")), ConfigError);
  }
}

TEST_CASE("json config is accepted via extension sniffing") {
  const char* json_body = R"({
    "environment": {"side_m": 30.0},
    "team": {"count": 2},
    "targets": {"count": 2, "prior_pos_std_m": 2.0, "prior_vel_std_mps": 0.2},
    "sensor": {"range_m": 10.0, "fov_deg": 94.0, "sigma_range_m": 0.15, "sigma_bearing_deg": 5.0},
    "dynamics": {"tau_s": 0.5, "process_noise_q": 0.002,
                 "speeds_mps": [1.0, 3.0], "turn_rates_radps": [0.0, 1.0, -1.0]},
    "planner": {"mode": "greedy", "max_expansions": 50000},
    "run": {"horizon_steps": 5, "total_steps": 10, "alpha": 1, "objective": "logdet",
            "seeds": [1, 2], "modes": ["resilient", "nonresilient"]}
  })";
  const auto toml_path = write_temp("rig_cfg_test.toml", kValidConfig);
  const auto json_path = write_temp("rig_cfg_test.json", json_body);
  const RunConfig a = load_config(toml_path.string());
  const RunConfig b = load_config(json_path.string());
  CHECK(canonical_config_json(a) == canonical_config_json(b));
  CHECK(config_hash(a) == config_hash(b));

  const RunConfig c = parse_config_text(replace_once(kValidConfig, "alpha = 1", "alpha = 2"));
  CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("csv schemas are frozen") {
  CHECK(timeline_csv_header() == "step,rmse_mean,rmse_peak,entropy_mean,logdet_raw,attacked_ids");
  CHECK(summary_csv_header() == "mode,seed,mean_rmse,peak_rmse,mean_entropy");
  CHECK(timeline_csv_name(PlanMode::Resilient, 7) == "timeline_resilient_7.csv");
}

TEST_CASE("explicit placement arrays are honored") {
  std::string with_poses = replace_once(kValidConfig, "count = 2",
                                        "count = 2\n"
                                        "start_x = [5.0, 25.0]\n"
                                        "start_y = [5.0, 25.0]\n"
                                        "start_theta_deg = [0.0, 90.0]");
  with_poses = replace_once(with_poses, "count = 2\nprior_pos_std_m",
                            "count = 2\nmean_x = [10.0, 20.0]\nmean_y = [10.0, 20.0]\nprior_pos_std_m");
  const RunConfig config = parse_config_text(with_poses);
  REQUIRE(config.scenario.robot_starts.size() == 2);
  CHECK(config.scenario.robot_starts[1].theta == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(config.scenario.target_prior_mean[4] == 20.0);
  CHECK(config.scenario.target_prior_mean[5] == 20.0);
}

TEST_CASE("simulate command: dry run writes only the manifest; full run has no orphans") {
  const auto cfg = write_temp("rig_sim_test.toml", kValidConfig);
  const auto out_root = std::filesystem::temp_directory_path() / "rig_sim_out";
  std::filesystem::remove_all(out_root);

  cli::SimulateArgs dry;
  dry.config_path = cfg.string();
  dry.out_dir = (out_root / "dry").string();
  dry.dry_run = true;
  REQUIRE(cli::cmd_simulate(dry) == cli::kExitOk);
  CHECK(files_in(out_root / "dry") == std::set<std::string>{"manifest.json"});

  cli::SimulateArgs full;
  full.config_path = cfg.string();
  full.out_dir = (out_root / "full").string();
  full.threads = 2;
  REQUIRE(cli::cmd_simulate(full) == cli::kExitOk);
  const auto names = files_in(out_root / "full");
  CHECK(names.count("manifest.json") == 1);
  CHECK(names.count("summary.csv") == 1);
  CHECK(names.count("timeline_resilient_1.csv") == 1);
  CHECK(names.count("timeline_nonresilient_2.csv") == 1);

  // Every file is listed in the manifest; nothing else was written.
  std::ifstream manifest(out_root / "full" / "manifest.json");
  std::string manifest_text((std::istreambuf_iterator<char>(manifest)),
                            std::istreambuf_iterator<char>());
  std::set<std::string> expected{"manifest.json"};
  for (const auto& name : names) {
    if (name == "manifest.json") continue;
    CHECK(manifest_text.find("\"" + name + "\"") != std::string::npos);
    expected.insert(name);
  }
  CHECK(names == expected);
}

TEST_CASE("simulate command: seed count and list overrides") {
  const auto cfg = write_temp("rig_sim_test2.toml", kValidConfig);
  const auto out_root = std::filesystem::temp_directory_path() / "rig_sim_seeds";
  std::filesystem::remove_all(out_root);

  cli::SimulateArgs args;
  args.config_path = cfg.string();
  args.out_dir = (out_root / "count").string();
  args.seeds = "3";
  args.modes = "resilient";
  args.dry_run = true;
  REQUIRE(cli::cmd_simulate(args) == cli::kExitOk);
  std::ifstream m1(out_root / "count" / "manifest.json");
  std::string t1((std::istreambuf_iterator<char>(m1)), std::istreambuf_iterator<char>());
  CHECK(t1.find("timeline_resilient_3.csv") != std::string::npos);
  CHECK(t1.find("nonresilient") == std::string::npos);

  args.out_dir = (out_root / "list").string();
  args.seeds = "5,9";
  REQUIRE(cli::cmd_simulate(args) == cli::kExitOk);
  std::ifstream m2(out_root / "list" / "manifest.json");
  std::string t2((std::istreambuf_iterator<char>(m2)), std::istreambuf_iterator<char>());
  CHECK(t2.find("timeline_resilient_5.csv") != std::string::npos);
  CHECK(t2.find("timeline_resilient_9.csv") != std::string::npos);
  CHECK(t2.find("timeline_resilient_1.csv") == std::string::npos);
}

TEST_CASE("simulate command: config errors exit with code 2") {
  cli::SimulateArgs args;
  args.config_path = "/nonexistent/rig.toml";
  CHECK(cli::cmd_simulate(args) == cli::kExitConfig);

  const auto bad = write_temp("rig_bad.toml", replace_once(kValidConfig, "side_m", "oops"));
  args.config_path = bad.string();
  CHECK(cli::cmd_simulate(args) == cli::kExitConfig);
}

TEST_CASE("plan command emits a JSON plan dump") {
  const auto cfg = write_temp("rig_plan_test.toml", kValidConfig);
  const auto out = std::filesystem::temp_directory_path() / "rig_plan.json";
  std::filesystem::remove(out);
  cli::PlanArgs args;
  args.config_path = cfg.string();
  args.out_path = out.string();
  args.alpha = 1;
  REQUIRE(cli::cmd_plan(args) == cli::kExitOk);
  std::ifstream in(out);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find("\"bait\"") != std::string::npos);
  CHECK(text.find("\"rounds\"") != std::string::npos);
  CHECK(text.find("\"plans\"") != std::string::npos);
}

TEST_CASE("verify-bounds command writes a report and honors the self-test hook") {
  const auto out_root = std::filesystem::temp_directory_path() / "rig_vb";
  std::filesystem::remove_all(out_root);

  cli::VerifyBoundsArgs args;
  args.out_dir = (out_root / "ok").string();
  args.instances = 2;
  args.seed = 5;
  args.suites = "lemmas";
  CHECK(cli::cmd_verify_bounds(args) == cli::kExitOk);
  CHECK(std::filesystem::exists(out_root / "ok" / "bounds_report.json"));

  cli::VerifyBoundsArgs inflated;
  inflated.out_dir = (out_root / "inflated").string();
  inflated.instances = 2;
  inflated.seed = 5;
  inflated.suites = "descent-bound";
  inflated.inflate_guarantees = 1.5;
  CHECK(cli::cmd_verify_bounds(inflated) == cli::kExitViolation);

  cli::VerifyBoundsArgs unknown;
  unknown.suites = "nonsense";
  CHECK(cli::cmd_verify_bounds(unknown) == cli::kExitConfig);
}
