#include "thermjump/driven.hpp"

#include <cmath>
#include <stdexcept>

#include "thermjump/rng.hpp"

namespace thermjump {

Generator2 driven_generator(const DrivenModel& model) {
  if (!(model.drive >= 0.0) || !std::isfinite(model.drive)) {
    throw std::invalid_argument("drive must be finite and >= 0");
  }
  Generator2 g = Generator2::thermal(model.rates, 0.0, cplx{});
  g.coupling_upper = -model.drive;
  g.coupling_lower = model.drive;
  g.validate();
  return g;
}

ConditionalState2 apply_atom_jump(const ConditionalState2& state, JumpKind kind) {
  const cplx projected = kind == JumpKind::Down ? state.amp_upper : state.amp_lower;
  const double mag = std::abs(projected);
  if (!(mag > 0.0)) {
    throw std::domain_error("jump projects onto a zero amplitude");
  }
  if (kind == JumpKind::Down) return {cplx{}, projected / mag};
  return {projected / mag, cplx{}};
}

DrivenTrajectoryPoint observe_driven(double t, const ConditionalState2& state) {
  const double n = state.norm_sq();
  const cplx coh = state.amp_lower * std::conj(state.amp_upper) / n;
  return {t, std::norm(state.amp_upper) / n, coh.real(), coh.imag()};
}

void run_driven(const DrivenModel& model, double t_max, double dt_out, Rng& rng,
                AtomState initial, const DrivenSink& sink) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw std::invalid_argument("t_max must be finite and > 0");
  }
  if (!(dt_out > 0.0) || !std::isfinite(dt_out)) {
    throw std::invalid_argument("dt_out must be finite and > 0");
  }
  const Generator2 gen = driven_generator(model);
  ConditionalState2 state = initial == AtomState::Excited
                                ? ConditionalState2{cplx{1.0}, cplx{}}
                                : ConditionalState2{cplx{}, cplx{1.0}};
  double t_start = 0.0;
  long long next_grid = 0;

  auto emit_grid_until = [&](double t_end, bool inclusive) {
    for (;;) {
      const double tg = static_cast<double>(next_grid) * dt_out;
      if (tg > t_end || (!inclusive && tg == t_end)) break;
      const auto s = closed_form_propagator(gen, tg - t_start).apply(state);
      if (sink.point) sink.point(observe_driven(tg, s));
      ++next_grid;
    }
  };

  while (t_start < t_max) {
    const auto jt = sample_jump_time(state, gen, rng, t_max - t_start);
    if (!jt.jumped) {
      emit_grid_until(t_max, true);
      break;
    }
    double t_jump = t_start + jt.time;
    if (t_jump <= t_start) t_jump = std::nextafter(t_start, t_max);
    if (t_jump > t_max) {
      emit_grid_until(t_max, true);
      break;
    }
    emit_grid_until(t_jump, false);
    const auto pre = closed_form_propagator(gen, jt.time).apply(state);
    const JumpKind kind = select_jump_type(pre, gen.gamma_down, gen.gamma_up, rng);
    state = apply_atom_jump(pre, kind);
    t_start = t_jump;
    if (sink.event) sink.event({t_jump, kind});
    if (sink.point) sink.point(observe_driven(t_jump, state));
  }
}

DrivenTrajectory simulate_driven(const DrivenModel& model, double t_max, double dt_out,
                                 std::uint64_t seed, AtomState initial) {
  Rng rng(seed);
  DrivenTrajectory out;
  out.record.initial = initial;
  DrivenSink sink{[&](const DrivenTrajectoryPoint& p) { out.series.push_back(p); },
                  [&](const JumpEvent& e) { out.record.events.push_back(e); }};
  run_driven(model, t_max, dt_out, rng, initial, sink);
  return out;
}

}  // namespace thermjump
