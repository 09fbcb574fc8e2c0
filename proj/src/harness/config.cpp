#include "thermjump/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "thermjump/harness/csv.hpp"

namespace thermjump {

namespace {

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("invalid number for '" + key + "': " + v);
  }
  if (pos != v.size() || !std::isfinite(out)) {
    throw ConfigError("invalid number for '" + key + "': " + v);
  }
  return out;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& v) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    // Accept integral values written in floating notation, e.g. 1e6.
    const double d = to_double(key, v);
    if (d != std::floor(d) || d < static_cast<double>(std::numeric_limits<Int>::min()) ||
        d > static_cast<double>(std::numeric_limits<Int>::max())) {
      throw ConfigError("invalid integer for '" + key + "': " + v);
    }
    return static_cast<Int>(d);
  }
  return out;
}

}  // namespace

Model parse_model(const std::string& s) {
  if (s == "einstein") return Model::Einstein;
  if (s == "driven") return Model::Driven;
  if (s == "mode") return Model::Mode;
  throw ConfigError("unknown model '" + s + "' (expected einstein, driven or mode)");
}

std::string to_string(Model m) {
  switch (m) {
    case Model::Einstein:
      return "einstein";
    case Model::Driven:
      return "driven";
    case Model::Mode:
      return "mode";
  }
  return "?";
}

double RunConfig::effective_nbar() const {
  if (temperature) return mean_photon_number(omega0, *temperature);
  return nbar;
}

PhysicalParams RunConfig::params() const {
  try {
    return PhysicalParams(a, effective_nbar(), drive);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

SelectedMode RunConfig::mode() const { return {kappa, detuning, phase}; }

void RunConfig::validate() const {
  if (!(a > 0.0)) throw ConfigError("a must be > 0");
  if (nbar < 0.0) throw ConfigError("nbar must be >= 0");
  if (temperature && *temperature < 0.0) throw ConfigError("temperature must be >= 0");
  if (!(omega0 > 0.0)) throw ConfigError("omega0 must be > 0");
  if (drive < 0.0) throw ConfigError("drive must be >= 0");
  if (kappa < 0.0) throw ConfigError("kappa must be >= 0");
  if (!(t_max > 0.0)) throw ConfigError("tmax must be > 0");
  if (!(dt_out > 0.0)) throw ConfigError("dt_out must be > 0");
  if (n_traj < 1) throw ConfigError("traj must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (!(budget > 0.0)) throw ConfigError("budget must be > 0");
  if (n_photons < 0) throw ConfigError("n must be >= 0");
  if (!(window > 0.0)) throw ConfigError("window must be > 0");
  if (nodes < 15) throw ConfigError("nodes must be >= 15");
  if (!initial.empty() && initial != "ground" && initial != "excited" && initial != "thermal") {
    throw ConfigError("initial must be ground, excited or thermal");
  }
  if (initial == "thermal" && model != Model::Mode) {
    throw ConfigError("initial = thermal applies to the mode model only");
  }
}

void RunConfig::check_budget(bool with_series) const {
  const auto p = params();
  double per_traj = t_max * (p.gamma_down() + p.gamma_up());
  if (with_series) per_traj += t_max / dt_out;
  const double estimate = per_traj * static_cast<double>(n_traj);
  if (estimate > budget) {
    std::ostringstream msg;
    msg << "estimated work " << estimate << " exceeds budget " << budget
        << " (raise --budget to allow)";
    throw ConfigError(msg.str());
  }
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  using csv::format_double;
  std::vector<std::pair<std::string, std::string>> out{
      {"model", to_string(model)},
      {"a", format_double(a)},
      {"nbar", format_double(effective_nbar())},
      {"drive", format_double(drive)},
      {"kappa", format_double(kappa)},
      {"detuning", format_double(detuning)},
      {"phase", format_double(phase)},
      {"tmax", format_double(t_max)},
      {"dt_out", format_double(dt_out)},
      {"traj", std::to_string(n_traj)},
      {"seed", std::to_string(seed)},
      {"initial", initial},
      {"budget", format_double(budget)},
  };
  if (temperature) {
    out.emplace_back("temperature", format_double(*temperature));
    out.emplace_back("omega0", format_double(omega0));
  }
  return out;
}

void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = normalize_key(trim(raw_key));
  const std::string v = trim(raw_value);
  if (key == "model") {
    cfg.model = parse_model(v);
  } else if (key == "a") {
    cfg.a = to_double(key, v);
  } else if (key == "nbar") {
    cfg.nbar = to_double(key, v);
    cfg.temperature.reset();
  } else if (key == "temperature") {
    cfg.temperature = to_double(key, v);
  } else if (key == "omega0") {
    cfg.omega0 = to_double(key, v);
  } else if (key == "drive") {
    cfg.drive = to_double(key, v);
  } else if (key == "kappa") {
    cfg.kappa = to_double(key, v);
  } else if (key == "detuning") {
    cfg.detuning = to_double(key, v);
  } else if (key == "phase") {
    cfg.phase = to_double(key, v);
  } else if (key == "tmax") {
    cfg.t_max = to_double(key, v);
  } else if (key == "dt_out") {
    cfg.dt_out = to_double(key, v);
  } else if (key == "traj") {
    cfg.n_traj = to_int<int>(key, v);
  } else if (key == "seed") {
    cfg.seed = to_int<std::uint64_t>(key, v);
  } else if (key == "out") {
    cfg.out_dir = v;
  } else if (key == "initial") {
    cfg.initial = v;
  } else if (key == "threads") {
    cfg.threads = to_int<int>(key, v);
  } else if (key == "budget") {
    cfg.budget = to_double(key, v);
  } else if (key == "n") {
    cfg.n_photons = to_int<int>(key, v);
  } else if (key == "window") {
    cfg.window = to_double(key, v);
  } else if (key == "nodes") {
    cfg.nodes = to_int<int>(key, v);
  } else {
    throw ConfigError("unknown key '" + raw_key + "'");
  }
}

std::vector<ConfigEntry> parse_config_text(const std::string& text) {
  std::vector<ConfigEntry> out;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    }
    out.push_back({std::move(key), std::move(value), lineno});
  }
  return out;
}

std::vector<ConfigEntry> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

void apply_settings(RunConfig& cfg, const std::vector<ConfigEntry>& entries) {
  std::set<std::string> seen;
  for (const auto& e : entries) seen.insert(normalize_key(e.key));
  if (seen.count("nbar") && seen.count("temperature")) {
    throw ConfigError("conflicting settings: nbar and temperature both given");
  }
  for (const auto& e : entries) {
    try {
      apply_setting(cfg, e.key, e.value);
    } catch (const ConfigError& err) {
      if (e.line > 0) {
        throw ConfigError("config line " + std::to_string(e.line) + ": " + err.what());
      }
      throw;
    }
  }
}

}  // namespace thermjump
