#include "rig/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "json.hpp"

#include "rig/errors.hpp"

namespace rig {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ConfigError("cannot write output file '" + file.string() + "'");
  return out;
}

std::string joined_ids(const std::vector<int>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) s += ';';
    s += std::to_string(ids[i]);
  }
  return s;
}

}  // namespace

void write_manifest(const std::filesystem::path& file, const Manifest& manifest) {
  nlohmann::ordered_json j;
  j["tool"] = manifest.tool;
  j["version"] = manifest.version;
  j["config_hash"] = manifest.config_hash;
  j["seeds"] = manifest.seeds;
  j["modes"] = manifest.modes;
  j["attack_oracle"] = manifest.attack_oracle;
  j["dry_run"] = manifest.dry_run;
  j["outputs"] = manifest.outputs;
  auto out = open_out(file);
  out << j.dump(2) << "\n";
}

std::string timeline_csv_header() {
  return "step,rmse_mean,rmse_peak,entropy_mean,logdet_raw,attacked_ids";
}

std::string summary_csv_header() { return "mode,seed,mean_rmse,peak_rmse,mean_entropy"; }

std::string timeline_csv_name(PlanMode mode, std::uint64_t seed) {
  return std::string("timeline_") + plan_mode_name(mode) + "_" + std::to_string(seed) + ".csv";
}

void write_timeline_csv(const std::filesystem::path& file, const MetricsTimeline& timeline) {
  auto out = open_out(file);
  out << timeline_csv_header() << "\n";
  for (int t = 0; t < timeline.steps(); ++t) {
    out << t + 1 << ',' << fmt(timeline.step_rmse_mean(t)) << ','
        << fmt(timeline.step_rmse_peak(t)) << ',' << fmt(timeline.step_entropy_mean(t)) << ','
        << fmt(timeline.logdet_raw[t]) << ',' << joined_ids(timeline.attacked_ids[t]) << "\n";
  }
}

void write_summary_csv(const std::filesystem::path& file, const ExperimentResult& result,
                       const std::vector<PlanMode>& modes) {
  auto out = open_out(file);
  out << summary_csv_header() << "\n";
  for (const auto& rec : result.trials) {
    out << plan_mode_name(rec.mode) << ',' << rec.seed << ',' << fmt(rec.summary.mean_rmse) << ','
        << fmt(rec.summary.peak_rmse) << ',' << fmt(rec.summary.mean_entropy) << "\n";
  }
  for (PlanMode mode : modes) {
    const TrialSummary agg = result.aggregate(mode);
    out << plan_mode_name(mode) << ",all," << fmt(agg.mean_rmse) << ',' << fmt(agg.peak_rmse)
        << ',' << fmt(agg.mean_entropy) << "\n";
  }
}

namespace {

struct Band {
  std::vector<double> lo, mid, hi;
};

Band band_of(const Eigen::MatrixXd& seeds_by_steps) {
  Band b;
  const int steps = static_cast<int>(seeds_by_steps.cols());
  b.lo.resize(steps);
  b.mid.resize(steps);
  b.hi.resize(steps);
  for (int t = 0; t < steps; ++t) {
    b.lo[t] = seeds_by_steps.col(t).minCoeff();
    b.mid[t] = seeds_by_steps.col(t).mean();
    b.hi[t] = seeds_by_steps.col(t).maxCoeff();
  }
  return b;
}

std::string color_for(const std::string& mode, double alpha) {
  // Paper-style palette: blue for the non-resilient planner, red for the
  // resilient one.
  const std::string rgb = mode == "resilient" ? "214,39,40" : "31,119,180";
  return "rgba(" + rgb + "," + fmt(alpha) + ")";
}

}  // namespace

void write_metric_svg(const std::filesystem::path& file, const std::string& title,
                      const std::map<std::string, Eigen::MatrixXd>& series_by_mode) {
  const double width = 720, height = 420;
  const double ml = 70, mr = 20, mt = 40, mb = 45;

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  int steps = 0;
  for (const auto& [mode, m] : series_by_mode) {
    steps = std::max(steps, static_cast<int>(m.cols()));
    if (m.size() > 0) {
      lo = std::min(lo, m.minCoeff());
      hi = std::max(hi, m.maxCoeff());
    }
  }
  if (steps == 0 || !std::isfinite(lo)) return;
  if (hi - lo < 1e-12) hi = lo + 1.0;

  const auto x_at = [&](int t) {
    return ml + (width - ml - mr) * (steps > 1 ? static_cast<double>(t) / (steps - 1) : 0.5);
  };
  const auto y_at = [&](double v) { return height - mb - (height - mt - mb) * (v - lo) / (hi - lo); };

  auto out = open_out(file);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" << title << "</text>\n";

  // Axes.
  out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr << "\" y2=\""
      << height - mb << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << height - mb
      << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << ml << "\" y=\"" << height - mb + 18
      << "\" font-family=\"sans-serif\" font-size=\"11\">1</text>\n";
  out << "<text x=\"" << width - mr << "\" y=\"" << height - mb + 18
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << steps
      << "</text>\n";
  out << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 8
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">step</text>\n";
  out << "<text x=\"" << ml - 8 << "\" y=\"" << y_at(lo)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(lo)
      << "</text>\n";
  out << "<text x=\"" << ml - 8 << "\" y=\"" << y_at(hi)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(hi)
      << "</text>\n";

  int legend_row = 0;
  for (const auto& [mode, matrix] : series_by_mode) {
    if (matrix.size() == 0) continue;
    const Band band = band_of(matrix);
    const int n = static_cast<int>(band.mid.size());

    // Shaded min/max band.
    out << "<polygon fill=\"" << color_for(mode, 0.25) << "\" stroke=\"none\" points=\"";
    for (int t = 0; t < n; ++t) out << fmt(x_at(t)) << ',' << fmt(y_at(band.hi[t])) << ' ';
    for (int t = n - 1; t >= 0; --t) out << fmt(x_at(t)) << ',' << fmt(y_at(band.lo[t])) << ' ';
    out << "\"/>\n";

    // Mean line.
    out << "<polyline fill=\"none\" stroke=\"" << color_for(mode, 1.0)
        << "\" stroke-width=\"1.5\" points=\"";
    for (int t = 0; t < n; ++t) out << fmt(x_at(t)) << ',' << fmt(y_at(band.mid[t])) << ' ';
    out << "\"/>\n";

    const double ly = mt + 16 + 18 * legend_row++;
    out << "<rect x=\"" << width - mr - 150 << "\" y=\"" << ly - 10
        << "\" width=\"14\" height=\"10\" fill=\"" << color_for(mode, 1.0) << "\"/>\n";
    out << "<text x=\"" << width - mr - 130 << "\" y=\"" << ly
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << mode << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace rig
