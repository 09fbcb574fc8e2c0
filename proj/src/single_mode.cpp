#include "thermjump/single_mode.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace thermjump {

namespace {

JumpKind previous_kind(Preparation p) {
  return p == Preparation::Up || p == Preparation::InitialE ? JumpKind::Up : JumpKind::Down;
}

ModeTrajectoryPoint observe(double t, const ManifoldState& s) {
  const double norm = std::norm(s.amp_e) + std::norm(s.amp_g);
  return {t, photon_expectation(s), std::norm(s.amp_e) / norm, s.n_index};
}

}  // namespace

void run_single_mode(const JumpRates& rates, const SelectedMode& mode, double t_max,
                     double dt_out, Rng& rng, const ManifoldState& initial,
                     const ModeSink& sink) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw std::invalid_argument("t_max must be finite and > 0");
  }
  if (!(dt_out > 0.0) || !std::isfinite(dt_out)) {
    throw std::invalid_argument("dt_out must be finite and > 0");
  }
  mode.validate();
  if (initial.n_index < -1) throw std::invalid_argument("n_index must be >= -1");

  ManifoldState state = initial;
  Generator2 gen = manifold_generator(rates, mode, state.n_index);
  double t_start = 0.0;
  long long next_grid = 0;

  auto emit_grid_until = [&](double t_end, bool inclusive) {
    for (;;) {
      const double tg = static_cast<double>(next_grid) * dt_out;
      if (tg > t_end || (!inclusive && tg == t_end)) break;
      const auto amps = closed_form_propagator(gen, tg - t_start).apply(state.amplitudes());
      ManifoldState s = state;
      s.amp_e = amps.amp_upper;
      s.amp_g = amps.amp_lower;
      if (sink.point) sink.point(observe(tg, s));
      ++next_grid;
    }
  };

  while (t_start < t_max) {
    const auto jt = sample_jump_time(state.amplitudes(), gen, rng, t_max - t_start);
    double t_jump = t_start + jt.time;
    if (!jt.jumped || t_jump > t_max) {
      emit_grid_until(t_max, true);
      break;
    }
    if (t_jump <= t_start) t_jump = std::nextafter(t_start, t_max);
    emit_grid_until(t_jump, false);

    ManifoldState pre = state;
    const auto amps = closed_form_propagator(gen, jt.time).apply(state.amplitudes());
    pre.amp_e = amps.amp_upper;
    pre.amp_g = amps.amp_lower;
    const JumpKind kind = select_jump_type(amps, rates.gamma_down, rates.gamma_up, rng);

    const int n_before = field_count(state);
    const bool anomalous = kind == previous_kind(state.last_jump);
    state = apply_mode_jump(pre, kind);
    if (sink.event) sink.event({{t_jump, kind}, n_before, field_count(state), anomalous});
    if (sink.point) sink.point(observe(t_jump, state));

    gen = manifold_generator(rates, mode, state.n_index);
    t_start = t_jump;
  }
}

namespace {

ModeTrajectory collect(const JumpRates& rates, const SelectedMode& mode, double t_max,
                       double dt_out, Rng& rng, const ManifoldState& initial) {
  ModeTrajectory out;
  out.initial = initial;
  out.t_max = t_max;
  ModeSink sink{[&](const ModeTrajectoryPoint& p) { out.series.push_back(p); },
                [&](const ClassifiedJumpEvent& e) { out.events.push_back(e); }};
  run_single_mode(rates, mode, t_max, dt_out, rng, initial, sink);
  return out;
}

}  // namespace

ManifoldState product_state(AtomState atom, int photons) {
  if (photons < 0) throw std::invalid_argument("photon count must be >= 0");
  if (atom == AtomState::Excited) {
    return {photons, cplx{1.0}, cplx{}, Preparation::InitialE};
  }
  return {photons - 1, cplx{}, cplx{1.0}, Preparation::InitialG};
}

int field_count(const ManifoldState& state) {
  // After an up-type preparation the atom is excited and the mode holds
  // n_index photons; after a down-type one the atom is in the ground state
  // with n_index + 1 photons.
  return previous_kind(state.last_jump) == JumpKind::Up ? state.n_index : state.n_index + 1;
}

Generator2 manifold_generator(const JumpRates& rates, const SelectedMode& mode, int n_index) {
  if (n_index < -1) throw std::invalid_argument("n_index must be >= -1");
  const double g = mode.coupling_mag * std::sqrt(static_cast<double>(n_index + 1));
  return Generator2::thermal(rates, mode.detuning, cplx{0.0, -g});
}

int sample_bose_einstein(double nbar, Rng& rng) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
    throw std::invalid_argument("nbar must be finite and >= 0");
  }
  const double u = rng.uniform_open();
  if (nbar == 0.0) return 0;
  const double log_q = std::log(nbar / (nbar + 1.0));
  const double n = std::floor(std::log(u) / log_q);
  if (n > static_cast<double>(std::numeric_limits<int>::max() / 2)) {
    throw std::overflow_error("sampled photon count overflows");
  }
  return static_cast<int>(n);
}

ManifoldState sample_initial_state(const PhysicalParams& params, Rng& rng) {
  const auto [p_g, p_e] = equilibrium_populations(params);
  (void)p_g;
  const bool excited = rng.uniform_open() < p_e;
  const int photons = sample_bose_einstein(params.nbar(), rng);
  return product_state(excited ? AtomState::Excited : AtomState::Ground, photons);
}

ManifoldState apply_mode_jump(const ManifoldState& state, JumpKind kind) {
  ManifoldState next;
  if (kind == JumpKind::Down) {
    const double mag = std::abs(state.amp_e);
    if (state.n_index < 0 || !(mag > 0.0)) {
      throw std::domain_error("down-jump requires a nonzero excited amplitude");
    }
    next = {state.n_index - 1, cplx{}, state.amp_e / mag, Preparation::Down};
  } else {
    const double mag = std::abs(state.amp_g);
    if (!(mag > 0.0)) {
      throw std::domain_error("up-jump requires a nonzero ground amplitude");
    }
    next = {state.n_index + 1, state.amp_g / mag, cplx{}, Preparation::Up};
  }
  return next;
}

double photon_expectation(const ManifoldState& state) {
  const double pe = std::norm(state.amp_e);
  const double pg = std::norm(state.amp_g);
  const double norm = pe + pg;
  if (!(norm > 0.0)) throw std::domain_error("state has zero norm");
  if (state.n_index < 0) return 0.0;
  const double n = static_cast<double>(state.n_index);
  return (n * pe + (n + 1.0) * pg) / norm;
}

ModeTrajectory simulate_single_mode(const JumpRates& rates, const SelectedMode& mode,
                                    double t_max, double dt_out, std::uint64_t seed,
                                    const ManifoldState& initial) {
  Rng rng(seed);
  return collect(rates, mode, t_max, dt_out, rng, initial);
}

ModeTrajectory simulate_single_mode(const PhysicalParams& params, const SelectedMode& mode,
                                    double t_max, double dt_out, std::uint64_t seed,
                                    std::optional<ManifoldState> initial) {
  Rng rng(seed);
  const ManifoldState start = initial ? *initial : sample_initial_state(params, rng);
  return collect(params.rates(), mode, t_max, dt_out, rng, start);
}

}  // namespace thermjump
