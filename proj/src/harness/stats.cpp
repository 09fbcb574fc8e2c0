#include "thermjump/harness/stats.hpp"

#include <cmath>
#include <stdexcept>

#include "thermjump/analytic.hpp"

namespace thermjump {

namespace {

template <typename T>
void grow(std::vector<T>& v, int n) {
  if (static_cast<int>(v.size()) <= n) v.resize(static_cast<std::size_t>(n) + 1, T{});
}

}  // namespace

RateEstimate rate_estimate(std::uint64_t count, double exposure) {
  if (!(exposure > 0.0)) throw std::invalid_argument("exposure time must be > 0");
  RateEstimate r;
  r.count = count;
  r.exposure = exposure;
  const double k = static_cast<double>(count);
  r.rate = k / exposure;
  r.std_error = std::sqrt(k) / exposure;
  if (count == 0) {
    r.upper_bound = -std::log(0.05) / exposure;
    r.low_statistics = true;
  } else {
    r.upper_bound = r.rate + 2.0 * r.std_error;
    r.low_statistics = count < 10;
  }
  return r;
}

EmpiricalRates classify_and_count(const std::vector<std::vector<ClassifiedJumpEvent>>& records,
                                  double total_time) {
  std::uint64_t ups = 0;
  std::uint64_t downs = 0;
  for (const auto& rec : records) {
    for (const auto& e : rec) {
      if (!e.anomalous) continue;
      (e.event.kind == JumpKind::Up ? ups : downs) += 1;
    }
  }
  return {rate_estimate(ups, total_time), rate_estimate(downs, total_time)};
}

void PhotonOccupation::add_time(int n, double dt) {
  if (n < 0) throw std::invalid_argument("negative photon count");
  grow(time_at, n);
  time_at[static_cast<std::size_t>(n)] += dt;
}

void PhotonOccupation::add_event(const ClassifiedJumpEvent& e) {
  if (!e.anomalous) return;
  auto& bins = e.event.kind == JumpKind::Up ? up_from : down_from;
  grow(bins, e.n_before);
  bins[static_cast<std::size_t>(e.n_before)] += 1;
}

void PhotonOccupation::merge(const PhotonOccupation& other) {
  for (std::size_t n = 0; n < other.time_at.size(); ++n) {
    grow(time_at, static_cast<int>(n));
    time_at[n] += other.time_at[n];
  }
  for (std::size_t n = 0; n < other.up_from.size(); ++n) {
    grow(up_from, static_cast<int>(n));
    up_from[n] += other.up_from[n];
  }
  for (std::size_t n = 0; n < other.down_from.size(); ++n) {
    grow(down_from, static_cast<int>(n));
    down_from[n] += other.down_from[n];
  }
}

double PhotonOccupation::total_time() const {
  double t = 0.0;
  for (double v : time_at) t += v;
  return t;
}

std::vector<double> PhotonOccupation::histogram() const {
  const double total = total_time();
  if (!(total > 0.0)) throw std::invalid_argument("empty occupation histogram");
  std::vector<double> h(time_at.size());
  for (std::size_t n = 0; n < h.size(); ++n) h[n] = time_at[n] / total;
  return h;
}

RateEstimate PhotonOccupation::up_rate(int n) const {
  const auto i = static_cast<std::size_t>(n);
  const double exposure = i < time_at.size() ? time_at[i] : 0.0;
  return rate_estimate(i < up_from.size() ? up_from[i] : 0, exposure);
}

RateEstimate PhotonOccupation::down_rate(int n) const {
  const auto i = static_cast<std::size_t>(n);
  const double exposure = i < time_at.size() ? time_at[i] : 0.0;
  return rate_estimate(i < down_from.size() ? down_from[i] : 0, exposure);
}

PhotonOccupation occupation_from_events(const ManifoldState& initial,
                                        const std::vector<ClassifiedJumpEvent>& events,
                                        double t_max) {
  PhotonOccupation occ;
  int count = field_count(initial);
  double t_prev = 0.0;
  for (const auto& e : events) {
    occ.add_time(count, e.event.time - t_prev);
    occ.add_event(e);
    count = e.n_after;
    t_prev = e.event.time;
  }
  occ.add_time(count, t_max - t_prev);
  return occ;
}

double tv_distance_to_bose_einstein(const std::vector<double>& histogram, double nbar) {
  double tv = 0.0;
  double pmf_mass = 0.0;
  for (std::size_t n = 0; n < histogram.size(); ++n) {
    const double p = bose_einstein_pmf(nbar, static_cast<int>(n));
    pmf_mass += p;
    tv += std::abs(histogram[n] - p);
  }
  tv += std::max(0.0, 1.0 - pmf_mass);
  return 0.5 * tv;
}

void RunningStats::add(double x) {
  ++n;
  const double d = x - mean;
  mean += d / static_cast<double>(n);
  m2 += d * (x - mean);
}

void RunningStats::merge(const RunningStats& other) {
  if (other.n == 0) return;
  if (n == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n);
  const double nb = static_cast<double>(other.n);
  const double d = other.mean - mean;
  const double total = na + nb;
  mean += d * nb / total;
  m2 += other.m2 + d * d * na * nb / total;
  n += other.n;
}

double RunningStats::std_error() const {
  return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
}

}  // namespace thermjump
