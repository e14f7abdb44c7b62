#include "rig/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <variant>

#include "json.hpp"

#include "rig/errors.hpp"
#include "rig/math_util.hpp"

namespace rig {

namespace {

using ConfigValue = std::variant<double, bool, std::string, std::vector<double>,
                                 std::vector<std::string>>;
using Section = std::map<std::string, ConfigValue>;
using Document = std::map<std::string, Section>;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& token, int line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config line " + std::to_string(line_no) + ": bad number '" + token + "'");
  }
}

std::vector<std::string> split_top_level(const std::string& body, int line_no) {
  std::vector<std::string> items;
  std::string current;
  bool in_string = false;
  for (char c : body) {
    if (c == '"') in_string = !in_string;
    if (c == ',' && !in_string) {
      items.push_back(trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  const std::string last = trim(current);
  if (!last.empty()) items.push_back(last);
  if (in_string) throw ConfigError("config line " + std::to_string(line_no) + ": unclosed string");
  return items;
}

ConfigValue parse_value(const std::string& raw, int line_no) {
  if (raw.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": missing value");
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"') {
      throw ConfigError("config line " + std::to_string(line_no) + ": unclosed string");
    }
    return raw.substr(1, raw.size() - 2);
  }
  if (raw == "true") return true;
  if (raw == "false") return false;
  if (raw.front() == '[') {
    if (raw.back() != ']') {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": arrays must close on the same line");
    }
    const auto items = split_top_level(raw.substr(1, raw.size() - 2), line_no);
    if (!items.empty() && items.front().front() == '"') {
      std::vector<std::string> strings;
      for (const auto& item : items) {
        if (item.size() < 2 || item.front() != '"' || item.back() != '"') {
          throw ConfigError("config line " + std::to_string(line_no) + ": bad string array");
        }
        strings.push_back(item.substr(1, item.size() - 2));
      }
      return strings;
    }
    std::vector<double> numbers;
    for (const auto& item : items) numbers.push_back(parse_number(item, line_no));
    return numbers;
  }
  return parse_number(raw, line_no);
}

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

Document parse_toml_subset(const std::string& text) {
  Document doc;
  std::string section_name;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("config line " + std::to_string(line_no) + ": bad section header");
      }
      section_name = trim(line.substr(1, line.size() - 2));
      if (section_name.empty()) {
        throw ConfigError("config line " + std::to_string(line_no) + ": empty section name");
      }
      doc[section_name];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    }
    if (section_name.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": key outside any section");
    }
    if (!doc[section_name].emplace(key, parse_value(trim(line.substr(eq + 1)), line_no)).second) {
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return doc;
}

Document parse_json_document(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("JSON config parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("JSON config must be an object of sections");
  Document doc;
  for (const auto& [section, body] : j.items()) {
    if (!body.is_object()) throw ConfigError("JSON config section '" + section + "' must be an object");
    for (const auto& [key, value] : body.items()) {
      if (value.is_number()) {
        doc[section][key] = value.get<double>();
      } else if (value.is_boolean()) {
        doc[section][key] = value.get<bool>();
      } else if (value.is_string()) {
        doc[section][key] = value.get<std::string>();
      } else if (value.is_array()) {
        if (!value.empty() && value.front().is_string()) {
          doc[section][key] = value.get<std::vector<std::string>>();
        } else {
          doc[section][key] = value.get<std::vector<double>>();
        }
      } else {
        throw ConfigError("JSON config key '" + section + "." + key + "' has unsupported type");
      }
    }
    doc[section];
  }
  return doc;
}

/// Tracks consumed keys so leftovers can be rejected.
class SectionReader {
 public:
  SectionReader(const Document& doc, std::string name) : name_(std::move(name)) {
    if (auto it = doc.find(name_); it != doc.end()) section_ = &it->second;
  }

  bool present() const { return section_ != nullptr; }

  template <typename T>
  std::optional<T> get(const std::string& key) {
    if (!section_) return std::nullopt;
    const auto it = section_->find(key);
    if (it == section_->end()) return std::nullopt;
    consumed_.insert(key);
    const T* v = std::get_if<T>(&it->second);
    if (!v) throw ConfigError("config key '" + name_ + "." + key + "' has the wrong type");
    return *v;
  }

  template <typename T>
  T require(const std::string& key) {
    auto v = get<T>(key);
    if (!v) throw ConfigError("config key '" + name_ + "." + key + "' is required");
    return *v;
  }

  double number_or(const std::string& key, double fallback) {
    return get<double>(key).value_or(fallback);
  }

  int integer_or(const std::string& key, int fallback) {
    const double v = number_or(key, fallback);
    if (v != static_cast<double>(static_cast<long long>(v))) {
      throw ConfigError("config key '" + name_ + "." + key + "' must be an integer");
    }
    return static_cast<int>(v);
  }

  void finish() const {
    if (!section_) return;
    for (const auto& [key, value] : *section_) {
      if (!consumed_.count(key)) {
        throw ConfigError("unknown config key '" + name_ + "." + key + "'");
      }
    }
  }

 private:
  std::string name_;
  const Section* section_ = nullptr;
  std::set<std::string> consumed_;
};

/// Angle fields accept either a _deg or a _rad suffix, never both.
double angle_field(SectionReader& reader, const std::string& stem, double fallback_rad) {
  const auto deg = reader.get<double>(stem + "_deg");
  const auto rad = reader.get<double>(stem + "_rad");
  if (deg && rad) {
    throw ConfigError("config: give either " + stem + "_deg or " + stem + "_rad, not both");
  }
  if (deg) return deg_to_rad(*deg);
  if (rad) return *rad;
  return fallback_rad;
}

RunConfig build_run_config(const Document& doc) {
  static const std::set<std::string> known_sections = {"environment", "team",    "targets",
                                                       "sensor",      "dynamics", "planner",
                                                       "run"};
  for (const auto& [section, body] : doc) {
    if (!known_sections.count(section)) {
      throw ConfigError("unknown config section '" + section + "'");
    }
  }

  RunConfig config;
  Scenario& s = config.scenario;

  {
    SectionReader env(doc, "environment");
    s.env_side = env.number_or("side_m", s.env_side);
    env.finish();
  }
  {
    SectionReader team(doc, "team");
    s.team_size = team.integer_or("count", 0);
    const auto xs = team.get<std::vector<double>>("start_x");
    const auto ys = team.get<std::vector<double>>("start_y");
    const auto th_deg = team.get<std::vector<double>>("start_theta_deg");
    const auto th_rad = team.get<std::vector<double>>("start_theta_rad");
    if (th_deg && th_rad) {
      throw ConfigError("config: give either team.start_theta_deg or team.start_theta_rad");
    }
    if (xs || ys || th_deg || th_rad) {
      if (!xs || !ys || !(th_deg || th_rad)) {
        throw ConfigError("config: explicit team placement needs start_x, start_y and a heading array");
      }
      std::vector<double> theta = th_deg ? *th_deg : *th_rad;
      if (xs->size() != ys->size() || xs->size() != theta.size()) {
        throw ConfigError("config: team placement arrays must share one length");
      }
      for (std::size_t i = 0; i < xs->size(); ++i) {
        const double t = th_deg ? deg_to_rad(theta[i]) : theta[i];
        s.robot_starts.push_back({(*xs)[i], (*ys)[i], wrap_angle(t)});
      }
      if (s.team_size == 0) s.team_size = static_cast<int>(s.robot_starts.size());
      if (s.team_size != static_cast<int>(s.robot_starts.size())) {
        throw ConfigError("config: team.count disagrees with the placement arrays");
      }
    }
    if (s.team_size <= 0) throw ConfigError("config: team.count is required");
    team.finish();
  }
  {
    SectionReader targets(doc, "targets");
    s.num_targets = targets.integer_or("count", 0);
    s.prior_position_std = targets.number_or("prior_pos_std_m", s.prior_position_std);
    s.prior_velocity_std = targets.number_or("prior_vel_std_mps", s.prior_velocity_std);
    const auto xs = targets.get<std::vector<double>>("mean_x");
    const auto ys = targets.get<std::vector<double>>("mean_y");
    if (xs || ys) {
      if (!xs || !ys || xs->size() != ys->size()) {
        throw ConfigError("config: targets.mean_x and targets.mean_y must share one length");
      }
      if (s.num_targets == 0) s.num_targets = static_cast<int>(xs->size());
      if (s.num_targets != static_cast<int>(xs->size())) {
        throw ConfigError("config: targets.count disagrees with the mean arrays");
      }
      s.target_prior_mean = Eigen::VectorXd::Zero(4 * s.num_targets);
      for (int m = 0; m < s.num_targets; ++m) {
        s.target_prior_mean[4 * m] = (*xs)[m];
        s.target_prior_mean[4 * m + 1] = (*ys)[m];
      }
    }
    if (s.num_targets <= 0) throw ConfigError("config: targets.count is required");
    targets.finish();
  }
  {
    SectionReader sensor(doc, "sensor");
    s.sensor.range = sensor.number_or("range_m", s.sensor.range);
    s.sensor.fov = angle_field(sensor, "fov", s.sensor.fov);
    s.sensor.sigma_range = sensor.number_or("sigma_range_m", s.sensor.sigma_range);
    s.sensor.sigma_bearing = angle_field(sensor, "sigma_bearing", s.sensor.sigma_bearing);
    sensor.finish();
  }
  {
    SectionReader dynamics(doc, "dynamics");
    s.tau = dynamics.number_or("tau_s", s.tau);
    s.process_noise_q = dynamics.number_or("process_noise_q", s.process_noise_q);
    s.paper_literal_unicycle =
        dynamics.get<bool>("paper_literal_unicycle").value_or(s.paper_literal_unicycle);
    const std::vector<double> speeds =
        dynamics.get<std::vector<double>>("speeds_mps").value_or(std::vector<double>{1.0, 3.0});
    const std::vector<double> rates =
        dynamics.get<std::vector<double>>("turn_rates_radps")
            .value_or(std::vector<double>{0.0, 1.0, -1.0, 3.0, -3.0});
    if (speeds.empty() || rates.empty()) {
      throw ConfigError("config: speeds_mps and turn_rates_radps must be nonempty");
    }
    // Declared control order: speed-major over the listed values.
    s.control_set.clear();
    for (double nu : speeds) {
      for (double omega : rates) s.control_set.push_back({nu, omega});
    }
    dynamics.finish();
  }
  {
    SectionReader planner(doc, "planner");
    const std::string mode = planner.get<std::string>("mode").value_or("greedy");
    if (mode == "greedy") {
      s.planner.mode = PlannerMode::GreedyPerStep;
    } else if (mode == "exhaustive") {
      s.planner.mode = PlannerMode::Exhaustive;
    } else {
      throw ConfigError("config: planner.mode must be 'greedy' or 'exhaustive'");
    }
    const int budget = planner.integer_or("max_expansions", 1'000'000);
    if (budget <= 0) throw ConfigError("config: planner.max_expansions must be positive");
    s.planner.max_expansions = static_cast<std::uint64_t>(budget);
    planner.finish();
  }
  {
    SectionReader run(doc, "run");
    s.horizon = run.integer_or("horizon_steps", s.horizon);
    s.total_steps = run.integer_or("total_steps", s.total_steps);
    s.alpha = run.integer_or("alpha", s.alpha);
    s.permanent_removal = run.get<bool>("permanent_removal").value_or(s.permanent_removal);
    const std::string objective = run.get<std::string>("objective").value_or("logdet");
    if (objective == "logdet") {
      s.objective = ObjectiveKind::LogDetGain;
    } else if (objective == "trace") {
      s.objective = ObjectiveKind::TraceGain;
    } else {
      throw ConfigError("config: run.objective must be 'logdet' or 'trace'");
    }
    const auto seeds = run.get<std::vector<double>>("seeds");
    s.seeds.clear();
    if (seeds) {
      for (double v : *seeds) {
        if (v < 0 || v != static_cast<double>(static_cast<std::uint64_t>(v))) {
          throw ConfigError("config: run.seeds must be non-negative integers");
        }
        s.seeds.push_back(static_cast<std::uint64_t>(v));
      }
    }
    if (s.seeds.empty()) s.seeds = {1};
    const auto modes = run.get<std::vector<std::string>>("modes");
    if (modes) {
      config.modes.clear();
      for (const auto& name : *modes) config.modes.push_back(parse_plan_mode(name));
    }
    if (config.modes.empty()) throw ConfigError("config: run.modes must be nonempty");
    run.finish();
  }
  return config;
}

}  // namespace

PlanMode parse_plan_mode(const std::string& name) {
  if (name == "resilient") return PlanMode::Resilient;
  if (name == "nonresilient") return PlanMode::NonResilient;
  throw ConfigError("unknown mode '" + name + "' (expected resilient or nonresilient)");
}

RunConfig parse_config_text(const std::string& text) {
  return build_run_config(parse_toml_subset(text));
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  const bool is_json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  return build_run_config(is_json ? parse_json_document(text) : parse_toml_subset(text));
}

std::string canonical_config_json(const RunConfig& config) {
  const Scenario& s = config.scenario;
  nlohmann::ordered_json j;
  j["environment"]["side_m"] = s.env_side;
  j["team"]["count"] = s.robot_starts.empty() ? s.team_size : static_cast<int>(s.robot_starts.size());
  nlohmann::ordered_json poses = nlohmann::ordered_json::array();
  for (const auto& r : s.robot_starts) poses.push_back({r.x1, r.x2, r.theta});
  j["team"]["poses"] = poses;
  j["targets"]["count"] = s.num_targets;
  j["targets"]["prior_pos_std_m"] = s.prior_position_std;
  j["targets"]["prior_vel_std_mps"] = s.prior_velocity_std;
  nlohmann::ordered_json means = nlohmann::ordered_json::array();
  for (int i = 0; i < s.target_prior_mean.size(); ++i) means.push_back(s.target_prior_mean[i]);
  j["targets"]["prior_mean"] = means;
  j["sensor"]["range_m"] = s.sensor.range;
  j["sensor"]["fov_rad"] = s.sensor.fov;
  j["sensor"]["sigma_range_m"] = s.sensor.sigma_range;
  j["sensor"]["sigma_bearing_rad"] = s.sensor.sigma_bearing;
  j["dynamics"]["tau_s"] = s.tau;
  j["dynamics"]["process_noise_q"] = s.process_noise_q;
  j["dynamics"]["paper_literal_unicycle"] = s.paper_literal_unicycle;
  nlohmann::ordered_json controls = nlohmann::ordered_json::array();
  for (const auto& u : s.control_set) controls.push_back({u.nu, u.omega});
  j["dynamics"]["control_set"] = controls;
  j["planner"]["mode"] = s.planner.mode == PlannerMode::Exhaustive ? "exhaustive" : "greedy";
  j["planner"]["max_expansions"] = s.planner.max_expansions;
  j["run"]["horizon_steps"] = s.horizon;
  j["run"]["total_steps"] = s.total_steps;
  j["run"]["alpha"] = s.alpha;
  j["run"]["permanent_removal"] = s.permanent_removal;
  j["run"]["objective"] = s.objective == ObjectiveKind::LogDetGain ? "logdet" : "trace";
  j["run"]["seeds"] = s.seeds;
  nlohmann::ordered_json modes = nlohmann::ordered_json::array();
  for (PlanMode m : config.modes) modes.push_back(plan_mode_name(m));
  j["run"]["modes"] = modes;
  return j.dump();
}

std::string config_hash(const RunConfig& config) {
  const std::string text = canonical_config_json(config);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << "fnv1a64:" << std::hex << h;
  return os.str();
}

}  // namespace rig
