#include "thermjump/harness/cli.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "thermjump/analytic.hpp"
#include "thermjump/driven.hpp"
#include "thermjump/einstein.hpp"
#include "thermjump/harness/config.hpp"
#include "thermjump/harness/csv.hpp"
#include "thermjump/harness/ensemble.hpp"
#include "thermjump/single_mode.hpp"

namespace thermjump {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Flags shared by every subcommand: (flag name, config key, help).
struct FlagSpec {
  const char* flag;
  const char* key;
  const char* help;
};

constexpr FlagSpec kCommonFlags[] = {
    {"--a", "a", "spontaneous emission rate A"},
    {"--nbar", "nbar", "mean thermal photon number"},
    {"--temperature", "temperature", "temperature (natural units); sets nbar from --omega0"},
    {"--omega0", "omega0", "transition frequency used with --temperature"},
    {"--drive", "drive", "coherent drive amplitude"},
    {"--kappa", "kappa", "selected-mode coupling |kappa|"},
    {"--detuning", "detuning", "selected-mode detuning"},
    {"--phase", "phase", "selected-mode coupling phase (no effect on dynamics)"},
    {"--tmax", "tmax", "simulated time"},
    {"--dt-out", "dt_out", "output sampling interval"},
    {"--seed", "seed", "64-bit master seed"},
    {"--traj", "traj", "number of trajectories (ensemble)"},
    {"--out", "out", "output directory"},
    {"--initial", "initial", "initial state: ground, excited or thermal"},
    {"--threads", "threads", "worker threads (ensemble)"},
    {"--budget", "budget", "maximum estimated events plus output points"},
};

struct Command {
  CLI::App* app = nullptr;
  std::map<std::string, std::string> values;  // config key -> flag text
  std::string config_path;
};

void add_flag(Command& cmd, const char* flag, const char* key, const char* help) {
  cmd.app->add_option_function<std::string>(
      flag, [&cmd, key](const std::string& v) { cmd.values[key] = v; }, help);
}

Command& make_command(CLI::App& app, std::vector<std::unique_ptr<Command>>& store,
                      const char* name, const char* help) {
  store.push_back(std::make_unique<Command>());
  Command& cmd = *store.back();
  cmd.app = app.add_subcommand(name, help);
  for (const auto& f : kCommonFlags) add_flag(cmd, f.flag, f.key, f.help);
  cmd.app->add_option("--config", cmd.config_path, "flat key = value config file");
  return cmd;
}

RunConfig build_config(const Command& cmd, Model model) {
  RunConfig cfg;
  cfg.model = model;
  if (!cmd.config_path.empty()) apply_settings(cfg, load_config_file(cmd.config_path));
  std::vector<ConfigEntry> flags;
  for (const auto& [k, v] : cmd.values) flags.push_back({k, v, 0});
  apply_settings(cfg, flags);
  cfg.validate();
  return cfg;
}

fs::path prepare_out_dir(const RunConfig& cfg) {
  fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + cfg.out_dir + "'");
  return dir;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
  return os;
}

AtomState atom_initial(const RunConfig& cfg) {
  return cfg.initial == "excited" ? AtomState::Excited : AtomState::Ground;
}

int cmd_einstein(const RunConfig& cfg, std::ostream& out) {
  cfg.check_budget(false);
  const auto rec = simulate_einstein(cfg.params(), atom_initial(cfg), cfg.t_max, cfg.seed);
  const auto dir = prepare_out_dir(cfg);
  auto os = open_out(dir / "events.csv");
  csv::write_events(os, rec.events);
  out << json{{"events", rec.events.size()},
              {"excited_fraction", excited_time(rec, cfg.t_max) / cfg.t_max},
              {"events_csv", (dir / "events.csv").string()}}
             .dump(2)
      << '\n';
  return 0;
}

int cmd_driven(const RunConfig& cfg, std::ostream& out) {
  cfg.check_budget(true);
  const auto traj = simulate_driven(cfg.params(), cfg.t_max, cfg.dt_out, cfg.seed,
                                    atom_initial(cfg));
  const auto dir = prepare_out_dir(cfg);
  auto series = open_out(dir / "series.csv");
  csv::write_driven_series(series, traj.series);
  auto events = open_out(dir / "events.csv");
  csv::write_events(events, traj.record.events);
  out << json{{"events", traj.record.events.size()},
              {"points", traj.series.size()},
              {"series_csv", (dir / "series.csv").string()},
              {"events_csv", (dir / "events.csv").string()}}
             .dump(2)
      << '\n';
  return 0;
}

int cmd_mode(const RunConfig& cfg, std::ostream& out) {
  cfg.check_budget(true);
  const auto params = cfg.params();
  std::optional<ManifoldState> initial;
  if (cfg.initial == "ground" || cfg.initial == "excited") {
    initial = product_state(atom_initial(cfg), 0);
  }
  const auto traj =
      simulate_single_mode(params, cfg.mode(), cfg.t_max, cfg.dt_out, cfg.seed, initial);
  const auto dir = prepare_out_dir(cfg);
  auto series = open_out(dir / "series.csv");
  csv::write_mode_series(series, traj.series);
  auto events = open_out(dir / "events.csv");
  csv::write_mode_events(events, traj.events);
  std::size_t anomalous = 0;
  for (const auto& e : traj.events) anomalous += e.anomalous ? 1 : 0;
  out << json{{"events", traj.events.size()},
              {"anomalous", anomalous},
              {"points", traj.series.size()},
              {"series_csv", (dir / "series.csv").string()},
              {"events_csv", (dir / "events.csv").string()}}
             .dump(2)
      << '\n';
  return 0;
}

json wuv_json(const RateSolution& s) {
  return {{"w_e", s.w_e}, {"w_g", s.w_g}, {"u", s.u_int}, {"v", s.v_int}};
}

int cmd_rates(const RunConfig& cfg, std::ostream& out) {
  const auto params = cfg.params();
  const auto mode = cfg.mode();
  const int n = cfg.n_photons;
  const auto rates = photon_jump_rates(params, mode, n);
  const auto [p_g, p_e] = equilibrium_populations(params);

  json j{{"a", params.a_coeff()},
         {"nbar", params.nbar()},
         {"gamma_down_atom", params.gamma_down()},
         {"gamma_up_atom", params.gamma_up()},
         {"p_e_eq", p_e},
         {"p_g_eq", p_g},
         {"kappa", mode.coupling_mag},
         {"detuning", mode.detuning},
         {"n", n},
         {"lorentzian", lorentzian(params, mode.detuning)},
         {"gamma_up", rates.gamma_up},
         {"gamma_down", rates.gamma_down}};

  // Probability that an up-jump into field count n is followed by another
  // up-jump, and that a down-jump leaving n photons is followed by another.
  const auto after_up = solve_wuv(params, mode, n, Prepared::e);
  j["wuv_after_up"] = wuv_json(after_up);
  j["prob_up_after_up"] = params.gamma_up() * after_up.w_g;
  j["prob_up_after_up_lowest_order"] = lowest_order_probability(params, mode, n, Prepared::e);
  if (n >= 1 && params.gamma_up() > 0.0) {
    const auto after_down = solve_wuv(params, mode, n - 1, Prepared::g);
    j["wuv_after_down"] = wuv_json(after_down);
    j["prob_down_after_down"] = params.gamma_down() * after_down.w_e;
    j["prob_down_after_down_lowest_order"] =
        lowest_order_probability(params, mode, n - 1, Prepared::g);
  } else {
    j["prob_down_after_down"] = nullptr;
    j["prob_down_after_down_lowest_order"] = nullptr;
  }
  out << j.dump(2) << '\n';
  return 0;
}

int cmd_consistency(const RunConfig& cfg, std::ostream& out) {
  const ModeSumQuadrature quad{cfg.window, cfg.nodes, true};
  const auto r = mode_sum_check(cfg.params(), quad);
  out << json{{"a", cfg.a},
              {"nbar", cfg.effective_nbar()},
              {"window", cfg.window},
              {"nodes", cfg.nodes},
              {"sum_up", r.sum_up},
              {"sum_down", r.sum_down},
              {"target_up", r.target_up},
              {"target_down", r.target_down},
              {"rel_err_up", r.rel_err_up},
              {"rel_err_down", r.rel_err_down},
              {"quadrature_error", r.quadrature_error}}
             .dump(2)
      << '\n';
  return 0;
}

int cmd_ensemble(const RunConfig& cfg, std::ostream& out) {
  const auto summary = ensemble_run(cfg);
  const auto j = to_json(summary);
  const auto dir = prepare_out_dir(cfg);
  auto os = open_out(dir / "summary.json");
  os << j.dump(2) << '\n';
  out << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Thermal quantum-jump trajectory simulator", "thermjump"};
  app.require_subcommand(1);
  std::vector<std::unique_ptr<Command>> store;

  auto& einstein = make_command(app, store, "einstein", "Einstein jump process");
  auto& driven = make_command(app, store, "driven", "driven atom with thermal jumps");
  auto& mode = make_command(app, store, "mode", "atom entangled with one reservoir mode");
  auto& rates = make_command(app, store, "rates", "analytic photon-number jump rates (JSON)");
  add_flag(rates, "--n", "n", "photon number N");
  auto& consistency =
      make_command(app, store, "consistency", "mode-sum closure of the jump rates (JSON)");
  add_flag(consistency, "--window", "window", "integration window in half-widths");
  add_flag(consistency, "--nodes", "nodes", "quadrature node budget");
  auto& ensemble = make_command(app, store, "ensemble", "parallel ensemble summary (JSON)");
  add_flag(ensemble, "--model", "model", "einstein, driven or mode");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*einstein.app) return cmd_einstein(build_config(einstein, Model::Einstein), out);
    if (*driven.app) return cmd_driven(build_config(driven, Model::Driven), out);
    if (*mode.app) return cmd_mode(build_config(mode, Model::Mode), out);
    if (*rates.app) return cmd_rates(build_config(rates, Model::Mode), out);
    if (*consistency.app) return cmd_consistency(build_config(consistency, Model::Mode), out);
    if (*ensemble.app) return cmd_ensemble(build_config(ensemble, Model::Mode), out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace thermjump
