#pragma once

// Thermal jumps plus a classical resonant drive, in the frame rotating at
// the atomic frequency. Upper amplitude = excited, lower = ground:
//
//     dCe/dt = -Gamma_down/2 Ce - drive Cg
//     dCg/dt = -Gamma_up/2   Cg + drive Ce

#include <cstdint>
#include <functional>
#include <vector>

#include "thermjump/engine.hpp"
#include "thermjump/physics.hpp"
#include "thermjump/record.hpp"
#include "thermjump/rng.hpp"

namespace thermjump {

struct DrivenTrajectoryPoint {
  double t = 0.0;
  double p_e = 0.0;
  double coh_re = 0.0;  // Re <g|psi><psi|e> / <psi|psi>
  double coh_im = 0.0;

  friend bool operator==(const DrivenTrajectoryPoint&, const DrivenTrajectoryPoint&) = default;
};

/// Rates and drive for the driven model. Unlike PhysicalParams this admits
/// zero decay, which the drive-only checks need.
struct DrivenModel {
  JumpRates rates;
  double drive = 0.0;

  static DrivenModel from(const PhysicalParams& params) {
    return {params.rates(), params.drive()};
  }
};

Generator2 driven_generator(const DrivenModel& model);
inline Generator2 driven_generator(const PhysicalParams& params) {
  return driven_generator(DrivenModel::from(params));
}

/// Projective jump: Down maps (a, b) -> (0, a/|a|), Up maps (a, b) -> (b/|b|, 0).
/// Throws std::domain_error when the projected amplitude is zero.
ConditionalState2 apply_atom_jump(const ConditionalState2& state, JumpKind kind);

DrivenTrajectoryPoint observe_driven(double t, const ConditionalState2& state);

struct DrivenTrajectory {
  std::vector<DrivenTrajectoryPoint> series;
  JumpRecord record;
};

struct DrivenSink {
  std::function<void(const DrivenTrajectoryPoint&)> point;
  std::function<void(const JumpEvent&)> event;
};

/// Streaming form of simulate_driven driven by an existing stream.
void run_driven(const DrivenModel& model, double t_max, double dt_out, Rng& rng,
                AtomState initial, const DrivenSink& sink);

/// Series holds observables on the grid k*dt_out in [0, t_max] plus one
/// post-jump point at every event time, in time order.
DrivenTrajectory simulate_driven(const DrivenModel& model, double t_max, double dt_out,
                                 std::uint64_t seed, AtomState initial = AtomState::Ground);

inline DrivenTrajectory simulate_driven(const PhysicalParams& params, double t_max,
                                        double dt_out, std::uint64_t seed,
                                        AtomState initial = AtomState::Ground) {
  return simulate_driven(DrivenModel::from(params), t_max, dt_out, seed, initial);
}

}  // namespace thermjump
