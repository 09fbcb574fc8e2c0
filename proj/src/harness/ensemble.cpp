#include "thermjump/harness/ensemble.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "thermjump/analytic.hpp"
#include "thermjump/driven.hpp"
#include "thermjump/einstein.hpp"
#include "thermjump/rng.hpp"
#include "thermjump/single_mode.hpp"

namespace thermjump {

namespace {

AtomState atom_initial(const RunConfig& cfg) {
  return cfg.initial == "excited" ? AtomState::Excited : AtomState::Ground;
}

TrajectoryStats einstein_stats(const RunConfig& cfg, std::uint64_t seed) {
  const auto rec = simulate_einstein(cfg.params(), atom_initial(cfg), cfg.t_max, seed);
  TrajectoryStats s;
  s.total_time = cfg.t_max;
  s.events = rec.events.size();
  const auto res = residence_times(rec);
  for (double t : res.excited) s.residence_down.add(t);
  for (double t : res.ground) s.residence_up.add(t);
  s.pe_integral = excited_time(rec, cfg.t_max);
  return s;
}

TrajectoryStats driven_stats(const RunConfig& cfg, std::uint64_t seed) {
  TrajectoryStats s;
  s.total_time = cfg.t_max;
  Rng rng(seed);
  double t_prev = 0.0;
  bool jump_point = false;
  DrivenSink sink{[&](const DrivenTrajectoryPoint& p) {
                    if (!jump_point) s.pe_samples.add(p.p_e);
                    jump_point = false;
                  },
                  [&](const JumpEvent& e) {
                    ++s.events;
                    (e.kind == JumpKind::Down ? s.residence_down : s.residence_up)
                        .add(e.time - t_prev);
                    t_prev = e.time;
                    jump_point = true;
                  }};
  run_driven(DrivenModel::from(cfg.params()), cfg.t_max, cfg.dt_out, rng, atom_initial(cfg),
             sink);
  return s;
}

TrajectoryStats mode_stats(const RunConfig& cfg, std::uint64_t seed) {
  const auto params = cfg.params();
  TrajectoryStats s;
  s.total_time = cfg.t_max;
  Rng rng(seed);
  ManifoldState initial;
  if (cfg.initial.empty() || cfg.initial == "thermal") {
    initial = sample_initial_state(params, rng);
  } else {
    initial = product_state(atom_initial(cfg), 0);
  }

  int count = field_count(initial);
  double t_prev = 0.0;
  bool jump_point = false;
  ModeSink sink{[&](const ModeTrajectoryPoint& p) {
                  if (!jump_point) s.pe_samples.add(p.p_e);
                  jump_point = false;
                },
                [&](const ClassifiedJumpEvent& e) {
                  ++s.events;
                  s.occupation.add_time(count, e.event.time - t_prev);
                  s.occupation.add_event(e);
                  if (e.anomalous) {
                    ++(e.event.kind == JumpKind::Up ? s.anomalous_up : s.anomalous_down);
                  }
                  (e.event.kind == JumpKind::Down ? s.residence_down : s.residence_up)
                      .add(e.event.time - t_prev);
                  count = e.n_after;
                  t_prev = e.event.time;
                  jump_point = true;
                }};
  run_single_mode(params.rates(), cfg.mode(), cfg.t_max, cfg.dt_out, rng, initial, sink);
  s.occupation.add_time(count, cfg.t_max - t_prev);
  return s;
}

}  // namespace

void TrajectoryStats::merge(const TrajectoryStats& other) {
  total_time += other.total_time;
  events += other.events;
  anomalous_up += other.anomalous_up;
  anomalous_down += other.anomalous_down;
  residence_down.merge(other.residence_down);
  residence_up.merge(other.residence_up);
  pe_integral += other.pe_integral;
  pe_samples.merge(other.pe_samples);
  occupation.merge(other.occupation);
}

TrajectoryFailure::TrajectoryFailure(int index, std::uint64_t seed, const std::string& what)
    : std::runtime_error("trajectory " + std::to_string(index) + " (seed " +
                         std::to_string(seed) + ") failed: " + what),
      index_(index),
      seed_(seed) {}

TrajectoryStats run_trajectory(const RunConfig& cfg, int index) {
  const std::uint64_t seed = split_seed(cfg.seed, static_cast<std::uint64_t>(index));
  try {
    switch (cfg.model) {
      case Model::Einstein:
        return einstein_stats(cfg, seed);
      case Model::Driven:
        return driven_stats(cfg, seed);
      case Model::Mode:
        return mode_stats(cfg, seed);
    }
  } catch (const std::exception& e) {
    throw TrajectoryFailure(index, seed, e.what());
  }
  throw TrajectoryFailure(index, seed, "unknown model");
}

EnsembleSummary ensemble_run(const RunConfig& cfg) {
  cfg.validate();
  cfg.check_budget(false);
  const auto params = cfg.params();

  std::vector<TrajectoryStats> per_traj(static_cast<std::size_t>(cfg.n_traj));
  std::atomic<int> next{0};
  std::mutex failure_mutex;
  std::optional<int> failed_index;
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      const int k = next.fetch_add(1);
      if (k >= cfg.n_traj) return;
      {
        std::lock_guard lock(failure_mutex);
        if (failed_index && *failed_index < k) return;
      }
      try {
        per_traj[static_cast<std::size_t>(k)] = run_trajectory(cfg, k);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failed_index || k < *failed_index) {
          failed_index = k;
          failure = std::current_exception();
        }
      }
    }
  };
  const int n_threads = std::min(cfg.threads, cfg.n_traj);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  EnsembleSummary out;
  out.config = cfg;
  for (const auto& s : per_traj) out.totals.merge(s);
  const auto& tot = out.totals;

  out.gamma_up_emp = rate_estimate(tot.anomalous_up, tot.total_time);
  out.gamma_down_emp = rate_estimate(tot.anomalous_down, tot.total_time);
  const auto [p_g, p_e] = equilibrium_populations(params);
  out.pe_eq = p_e;
  out.pe_time_avg = cfg.model == Model::Einstein ? tot.pe_integral / tot.total_time
                                                 : tot.pe_samples.mean;

  if (cfg.model == Model::Mode) {
    const auto mode = cfg.mode();
    // Stationary totals: sum_N p_N gamma(N) with N replaced by its mean.
    const double base = lorentzian(params, mode.detuning) * 2.0 * std::numbers::pi *
                        mode.coupling_mag * mode.coupling_mag;
    out.gamma_up_analytic = base * (params.nbar() + 1.0) * p_e;
    out.gamma_down_analytic = base * params.nbar() * p_g;
    out.histogram = tot.occupation.histogram();
    out.tv_distance = tv_distance_to_bose_einstein(out.histogram, params.nbar());
    for (std::size_t n = 0; n < tot.occupation.time_at.size(); ++n) {
      const double t = tot.occupation.time_at[n];
      if (!(t > 0.0)) continue;
      const int ni = static_cast<int>(n);
      const auto analytic = photon_jump_rates(params, mode, ni);
      out.n_resolved.push_back({ni, t, tot.occupation.up_rate(ni), tot.occupation.down_rate(ni),
                                analytic.gamma_up, analytic.gamma_down});
    }
  }
  return out;
}

namespace {

nlohmann::json rate_json(const RateEstimate& r) {
  return {{"count", r.count},        {"rate", r.rate},
          {"stderr", r.std_error},   {"upper_bound", r.upper_bound},
          {"low_statistics", r.low_statistics}};
}

}  // namespace

nlohmann::json to_json(const EnsembleSummary& s) {
  using nlohmann::json;
  const auto& tot = s.totals;
  json j;
  j["model"] = to_string(s.config.model);
  j["seed"] = s.config.seed;
  json echo = json::object();
  for (const auto& [k, v] : s.config.echo()) echo[k] = v;
  j["config_echo"] = echo;
  j["n_traj"] = s.config.n_traj;
  j["total_time"] = tot.total_time;
  j["events"] = tot.events;

  j["histogram"] = s.histogram;
  j["tv_distance"] = s.tv_distance ? json(*s.tv_distance) : json(nullptr);
  j["gamma_up_emp"] = s.gamma_up_emp.rate;
  j["gamma_up_emp_stderr"] = s.gamma_up_emp.std_error;
  j["gamma_down_emp"] = s.gamma_down_emp.rate;
  j["gamma_down_emp_stderr"] = s.gamma_down_emp.std_error;
  j["gamma_up_detail"] = rate_json(s.gamma_up_emp);
  j["gamma_down_detail"] = rate_json(s.gamma_down_emp);
  j["gamma_up_analytic"] = s.gamma_up_analytic;
  j["gamma_down_analytic"] = s.gamma_down_analytic;

  json nres = json::array();
  for (const auto& r : s.n_resolved) {
    nres.push_back({{"n", r.n},
                    {"time", r.time},
                    {"up", rate_json(r.up)},
                    {"down", rate_json(r.down)},
                    {"up_analytic", r.up_analytic},
                    {"down_analytic", r.down_analytic}});
  }
  j["n_resolved"] = nres;

  j["pe_time_avg"] = s.pe_time_avg;
  j["pe_eq"] = s.pe_eq;
  j["residence_down_mean"] = tot.residence_down.mean;
  j["residence_down_stderr"] = tot.residence_down.std_error();
  j["residence_down_count"] = tot.residence_down.n;
  j["residence_up_mean"] = tot.residence_up.mean;
  j["residence_up_stderr"] = tot.residence_up.std_error();
  j["residence_up_count"] = tot.residence_up.n;
  return j;
}

}  // namespace thermjump
