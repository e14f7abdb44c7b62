#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rig/simulation.hpp"

namespace rig {

/// Run provenance, written before any result file. Every result file the run
/// will produce is listed in `outputs`.
struct Manifest {
  std::string tool;
  std::string version;
  std::string config_hash;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> modes;
  std::string attack_oracle = "exact";
  bool dry_run = false;
  std::vector<std::string> outputs;
};

void write_manifest(const std::filesystem::path& file, const Manifest& manifest);

/// Versioned CSV schemas; golden-tested.
std::string timeline_csv_header();
std::string summary_csv_header();

std::string timeline_csv_name(PlanMode mode, std::uint64_t seed);

void write_timeline_csv(const std::filesystem::path& file, const MetricsTimeline& timeline);

/// Per-(mode, seed) rows followed by one aggregate row per mode (seed "all").
void write_summary_csv(const std::filesystem::path& file, const ExperimentResult& result,
                       const std::vector<PlanMode>& modes);

/// Min/mean/max band across seeds per step, one band and mean line per mode,
/// self-contained static SVG.
void write_metric_svg(const std::filesystem::path& file, const std::string& title,
                      const std::map<std::string, Eigen::MatrixXd>& series_by_mode);

}  // namespace rig
