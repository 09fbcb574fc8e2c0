#pragma once

// Trajectory statistics: empirical anomalous-jump rates, photon-count
// occupation histograms, and residence-time summaries.

#include <cstdint>
#include <map>
#include <vector>

#include "thermjump/single_mode.hpp"

namespace thermjump {

/// Empirical rate with a Poisson standard error. With zero events the rate
/// is 0, `upper_bound` is the one-sided 95% bound -ln(0.05)/T ~ 3/T, and
/// `low_statistics` is set.
struct RateEstimate {
  std::uint64_t count = 0;
  double exposure = 0.0;
  double rate = 0.0;
  double std_error = 0.0;
  double upper_bound = 0.0;
  bool low_statistics = false;
};

RateEstimate rate_estimate(std::uint64_t count, double exposure);

struct EmpiricalRates {
  RateEstimate up;    // anomalous up-up events per unit time
  RateEstimate down;  // anomalous down-down events per unit time
};

EmpiricalRates classify_and_count(const std::vector<std::vector<ClassifiedJumpEvent>>& records,
                                  double total_time);

/// Occupation time and anomalous counts binned by the integer field count
/// before the jump. Merging is exact and order-independent for the counts;
/// times are summed in the order given.
struct PhotonOccupation {
  std::vector<double> time_at;           // index N
  std::vector<std::uint64_t> up_from;    // anomalous up-up events leaving N
  std::vector<std::uint64_t> down_from;  // anomalous down-down events leaving N

  void add_time(int n, double dt);
  void add_event(const ClassifiedJumpEvent& e);
  void merge(const PhotonOccupation& other);
  double total_time() const;

  /// Time-weighted distribution of the field count, normalized.
  std::vector<double> histogram() const;
  RateEstimate up_rate(int n) const;
  RateEstimate down_rate(int n) const;
};

/// Accumulates the occupation of one single-mode trajectory from its
/// initial state and classified events over [0, t_max].
PhotonOccupation occupation_from_events(const ManifoldState& initial,
                                        const std::vector<ClassifiedJumpEvent>& events,
                                        double t_max);

/// Total-variation distance 1/2 sum |p_hat - p| against the Bose-Einstein
/// pmf, with the pmf mass beyond the histogram counted in full.
double tv_distance_to_bose_einstein(const std::vector<double>& histogram, double nbar);

/// Running mean and variance (Welford), mergeable.
struct RunningStats {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x);
  void merge(const RunningStats& other);
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double std_error() const;
};

}  // namespace thermjump
