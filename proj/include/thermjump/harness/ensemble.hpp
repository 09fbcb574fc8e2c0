#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "thermjump/harness/config.hpp"
#include "thermjump/harness/stats.hpp"

namespace thermjump {

/// Reduced statistics of one trajectory. Trajectories are merged in index
/// order, so the ensemble result does not depend on scheduling.
struct TrajectoryStats {
  double total_time = 0.0;
  std::uint64_t events = 0;
  std::uint64_t anomalous_up = 0;
  std::uint64_t anomalous_down = 0;
  RunningStats residence_down;  // intervals ending in a down-jump
  RunningStats residence_up;    // intervals ending in an up-jump
  double pe_integral = 0.0;     // exact for einstein
  RunningStats pe_samples;      // grid samples for driven / mode
  PhotonOccupation occupation;  // mode only

  void merge(const TrajectoryStats& other);
};

struct NResolvedRate {
  int n = 0;
  double time = 0.0;
  RateEstimate up;
  RateEstimate down;
  double up_analytic = 0.0;
  double down_analytic = 0.0;
};

struct EnsembleSummary {
  RunConfig config;
  TrajectoryStats totals;
  RateEstimate gamma_up_emp;
  RateEstimate gamma_down_emp;
  double gamma_up_analytic = 0.0;
  double gamma_down_analytic = 0.0;
  std::vector<double> histogram;        // mode only
  std::optional<double> tv_distance;    // mode only
  std::vector<NResolvedRate> n_resolved;
  double pe_time_avg = 0.0;
  double pe_eq = 0.0;
};

/// Thrown when a trajectory fails; names the failing index and its seed.
class TrajectoryFailure : public std::runtime_error {
 public:
  TrajectoryFailure(int index, std::uint64_t seed, const std::string& what);
  int index() const { return index_; }
  std::uint64_t seed() const { return seed_; }

 private:
  int index_;
  std::uint64_t seed_;
};

/// Statistics of trajectory `index` of the ensemble defined by `cfg`
/// (seed = split_seed(cfg.seed, index)).
TrajectoryStats run_trajectory(const RunConfig& cfg, int index);

/// Runs cfg.n_traj trajectories on cfg.threads worker threads.
EnsembleSummary ensemble_run(const RunConfig& cfg);

nlohmann::json to_json(const EnsembleSummary& summary);

}  // namespace thermjump
