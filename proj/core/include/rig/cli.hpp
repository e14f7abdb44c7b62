#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace rig::cli {

/// Exit codes: 0 success, 1 runtime error, 2 config/usage error,
/// 3 bound violation.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitViolation = 3;

struct SimulateArgs {
  std::string config_path;
  std::string out_dir = "rig_out";
  std::optional<std::string> modes;  ///< comma list, overrides the config
  std::optional<std::string> seeds;  ///< integer count (1..N) or comma list
  int threads = 0;                   ///< 0 = hardware; RIG_THREADS overrides
  bool dry_run = false;
  bool plots = false;
};

int cmd_simulate(const SimulateArgs& args);

struct VerifyBoundsArgs {
  std::string out_dir = ".";
  int instances = 100;
  std::uint64_t seed = 7;
  std::optional<std::string> suites;  ///< comma list; default all
  double inflate_guarantees = 1.0;    ///< self-test hook
};

int cmd_verify_bounds(const VerifyBoundsArgs& args);

struct PlanArgs {
  std::string config_path;
  std::optional<int> alpha;
  std::string mode = "resilient";
  std::string out_path = "-";  ///< "-" = stdout
};

int cmd_plan(const PlanArgs& args);

int run_cli(int argc, const char* const* argv);

}  // namespace rig::cli
