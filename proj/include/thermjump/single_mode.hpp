#pragma once

// Atom entangled with one selected reservoir mode. Between jumps the joint
// state lives in the two-dimensional manifold
//
//     span{ |e>|n>, |g>|n+1> },   n = n_index >= -1,
//
// with n + 1 quanta shared between atom and mode. n_index = -1 is the floor
// manifold, spanned by |g>|0> alone. Jumps collapse onto a product state and
// move to a neighbouring manifold or stay in place.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "thermjump/engine.hpp"
#include "thermjump/physics.hpp"
#include "thermjump/record.hpp"
#include "thermjump/rng.hpp"

namespace thermjump {

/// Label of the preparation: the kind of the last jump, or the initial
/// product state.
enum class Preparation { Up, Down, InitialE, InitialG };

struct ManifoldState {
  int n_index = -1;
  cplx amp_e{0.0, 0.0};  // coefficient of |e>|n_index>
  cplx amp_g{1.0, 0.0};  // coefficient of |g>|n_index + 1>
  Preparation last_jump = Preparation::InitialG;

  ConditionalState2 amplitudes() const { return {amp_e, amp_g}; }
  friend bool operator==(const ManifoldState&, const ManifoldState&) = default;
};

/// Product state with the atom in `atom` and `photons` quanta in the mode.
ManifoldState product_state(AtomState atom, int photons);

/// Integer photon count of the mode in a post-jump (product) state.
int field_count(const ManifoldState& state);

struct ModeTrajectoryPoint {
  double t = 0.0;
  double n_expect = 0.0;
  double p_e = 0.0;
  int n_index = -1;

  friend bool operator==(const ModeTrajectoryPoint&, const ModeTrajectoryPoint&) = default;
};

struct ClassifiedJumpEvent {
  JumpEvent event;
  int n_before = 0;
  int n_after = 0;
  bool anomalous = false;

  friend bool operator==(const ClassifiedJumpEvent&, const ClassifiedJumpEvent&) = default;
};

/// Generator of the amplitude equations in manifold n_index:
/// decay -(Gamma_down - i dw)/2, -(Gamma_up + i dw)/2 and coupling
/// -i |kappa| sqrt(n_index + 1).
Generator2 manifold_generator(const JumpRates& rates, const SelectedMode& mode, int n_index);
inline Generator2 manifold_generator(const PhysicalParams& params, const SelectedMode& mode,
                                     int n_index) {
  return manifold_generator(params.rates(), mode, n_index);
}

/// Atom from the equilibrium populations, mode photons from the
/// Bose-Einstein distribution with mean nbar.
ManifoldState sample_initial_state(const PhysicalParams& params, Rng& rng);

/// Bose-Einstein photon count by inversion of the geometric CDF.
int sample_bose_einstein(double nbar, Rng& rng);

/// Down: |e>|n> -> |g>|n>, new n_index = n_index - 1.
/// Up:   |g>|n+1> -> |e>|n+1>, new n_index = n_index + 1.
/// Throws std::domain_error if the projected amplitude is zero, in
/// particular for Down on the floor manifold.
ManifoldState apply_mode_jump(const ManifoldState& state, JumpKind kind);

/// [n |amp_e|^2 + (n+1) |amp_g|^2] / norm, 0 on the floor manifold.
double photon_expectation(const ManifoldState& state);

struct ModeTrajectory {
  ManifoldState initial;
  double t_max = 0.0;
  std::vector<ModeTrajectoryPoint> series;
  std::vector<ClassifiedJumpEvent> events;
};

/// Receives output as it is produced, for runs too long to keep in memory.
struct ModeSink {
  std::function<void(const ModeTrajectoryPoint&)> point;
  std::function<void(const ClassifiedJumpEvent&)> event;
};

/// Streaming form of simulate_single_mode driven by an existing stream.
void run_single_mode(const JumpRates& rates, const SelectedMode& mode, double t_max,
                     double dt_out, Rng& rng, const ManifoldState& initial,
                     const ModeSink& sink);

/// Series holds observables on the grid k*dt_out in [0, t_max] plus one
/// post-jump point at every event. The initial state is drawn from the
/// thermal distribution unless supplied.
ModeTrajectory simulate_single_mode(const JumpRates& rates, const SelectedMode& mode,
                                    double t_max, double dt_out, std::uint64_t seed,
                                    const ManifoldState& initial);
ModeTrajectory simulate_single_mode(const PhysicalParams& params, const SelectedMode& mode,
                                    double t_max, double dt_out, std::uint64_t seed,
                                    std::optional<ManifoldState> initial = std::nullopt);

}  // namespace thermjump
