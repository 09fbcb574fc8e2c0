#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "thermjump/physics.hpp"

namespace thermjump {

/// Usage or configuration error; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Model { Einstein, Driven, Mode };

Model parse_model(const std::string& s);
std::string to_string(Model m);

struct RunConfig {
  Model model = Model::Mode;
  double a = 1.0;
  double nbar = 1.0;
  double drive = 0.0;
  double kappa = 0.0;
  double detuning = 0.0;
  double phase = 0.0;
  // Alternative to nbar: Planck occupation at (omega0, temperature), natural units.
  std::optional<double> temperature;
  double omega0 = 1.0;

  double t_max = 100.0;
  double dt_out = 0.5;
  int n_traj = 1;
  std::uint64_t seed = 42;
  std::string out_dir = ".";
  std::string initial;  // ground | excited | thermal; empty = model default
  int threads = 1;
  double budget = 1e9;  // cap on estimated events + output points

  // rates / consistency
  int n_photons = 1;
  double window = 200.0;
  int nodes = 4096;

  double effective_nbar() const;
  PhysicalParams params() const;
  SelectedMode mode() const;

  /// Range checks across all fields; throws ConfigError.
  void validate() const;

  /// Refuses runs whose estimated event and output-point count exceeds
  /// `budget`. `with_series` adds t_max/dt_out points per trajectory.
  void check_budget(bool with_series) const;

  /// Flat key/value view of every setting (thread count excluded), in a
  /// fixed order.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Sets one field from its textual form. Keys accept '-' or '_'.
/// Throws ConfigError on unknown keys or unparsable values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// One `key = value` assignment with its source line.
struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

/// Parses flat `key = value` lines; '#' starts a comment, blank lines are
/// skipped.
std::vector<ConfigEntry> parse_config_text(const std::string& text);
std::vector<ConfigEntry> load_config_file(const std::string& path);

/// Applies a batch of settings from one source. Setting both `nbar` and
/// `temperature` within the same batch is a conflict.
void apply_settings(RunConfig& cfg, const std::vector<ConfigEntry>& entries);

}  // namespace thermjump
