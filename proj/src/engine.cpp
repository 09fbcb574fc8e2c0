#include "thermjump/engine.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace thermjump {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// sinh(z)/z, with the removable singularity filled in.
cplx sinhc(cplx z) {
  if (std::abs(z) < 1e-3) {
    const cplx z2 = z * z;
    return 1.0 + z2 / 6.0 * (1.0 + z2 / 20.0 * (1.0 + z2 / 42.0));
  }
  return std::sinh(z) / z;
}

struct Evaluation {
  double survival;
  double weight;
};

Evaluation evaluate(const ConditionalState2& state, const Generator2& gen, double t) {
  const auto s = closed_form_propagator(gen, t).apply(state);
  return {s.norm_sq(), jump_weight(s, gen.gamma_down, gen.gamma_up)};
}

[[noreturn]] void fail(const char* what, double lo, double hi, double s_lo, double s_hi,
                       double u) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "jump-time root finder: " << what << " (bracket [" << lo << ", " << hi
      << "], survival [" << s_lo << ", " << s_hi << "], threshold " << u << ")";
  throw RootFindError(msg.str());
}

}  // namespace

ConditionalState2 ConditionalState2::normalized() const {
  const double n = std::sqrt(norm_sq());
  if (!(n > 0.0)) throw std::domain_error("cannot normalize a zero state");
  return {amp_upper / n, amp_lower / n};
}

Generator2 Generator2::thermal(const JumpRates& rates, double detuning, cplx coupling) {
  const cplx i{0.0, 1.0};
  Generator2 g;
  g.decay_upper = -0.5 * (rates.gamma_down - i * detuning);
  g.decay_lower = -0.5 * (rates.gamma_up + i * detuning);
  g.coupling_upper = coupling;
  g.coupling_lower = coupling;
  g.gamma_down = rates.gamma_down;
  g.gamma_up = rates.gamma_up;
  return g;
}

void Generator2::validate() const {
  if (!finite(decay_upper) || !finite(decay_lower) || !finite(coupling_upper) ||
      !finite(coupling_lower) || !std::isfinite(gamma_down) || !std::isfinite(gamma_up)) {
    throw std::invalid_argument("generator has non-finite entries");
  }
  if (decay_upper.real() > 0.0 || decay_lower.real() > 0.0) {
    throw std::invalid_argument("generator diagonal must have non-positive real part");
  }
  if (gamma_down < 0.0 || gamma_up < 0.0) {
    throw std::invalid_argument("decay rates must be >= 0");
  }
}

Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
  Matrix2 r;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    }
  }
  return r;
}

Matrix2 closed_form_propagator(const Generator2& gen, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("t must be finite and >= 0");
  if (!finite(gen.decay_upper) || !finite(gen.decay_lower) || !finite(gen.coupling_upper) ||
      !finite(gen.coupling_lower)) {
    throw std::invalid_argument("generator has non-finite entries");
  }
  const cplx mean = 0.5 * (gen.decay_upper + gen.decay_lower);
  const cplx half_diff = 0.5 * (gen.decay_upper - gen.decay_lower);
  const cplx delta = std::sqrt(half_diff * half_diff + gen.coupling_upper * gen.coupling_lower);

  cplx even;  // exp(mean t) cosh(delta t)
  cplx odd;   // exp(mean t) sinh(delta t) / delta
  if (std::abs(delta.real()) * t > 20.0) {
    const cplx e_plus = std::exp((mean + delta) * t);
    const cplx e_minus = std::exp((mean - delta) * t);
    even = 0.5 * (e_plus + e_minus);
    odd = (e_plus - e_minus) / (2.0 * delta);
  } else {
    const cplx scale = std::exp(mean * t);
    even = scale * std::cosh(delta * t);
    odd = scale * t * sinhc(delta * t);
  }
  Matrix2 p;
  p(0, 0) = even + odd * half_diff;
  p(0, 1) = odd * gen.coupling_upper;
  p(1, 0) = odd * gen.coupling_lower;
  p(1, 1) = even - odd * half_diff;
  return p;
}

double survival_probability(const ConditionalState2& state, const Generator2& gen, double t) {
  return closed_form_propagator(gen, t).apply(state).norm_sq();
}

double jump_weight(const ConditionalState2& state, double gamma_down, double gamma_up) {
  return gamma_down * std::norm(state.amp_upper) + gamma_up * std::norm(state.amp_lower);
}

JumpTime solve_jump_time(const ConditionalState2& state, const Generator2& gen, double u,
                         double t_max) {
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("threshold must lie in (0, 1)");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw std::invalid_argument("t_max must be finite and > 0");
  }
  constexpr double kTolerance = 1e-12;

  const double s_end = survival_probability(state, gen, t_max);
  if (s_end > u) return {false, t_max};

  // Expand a bracket [lo, hi] with S(lo) > u >= S(hi), starting from the
  // waiting time the initial rate alone would give.
  double rate = jump_weight(state, gen.gamma_down, gen.gamma_up);
  if (!(rate > 0.0)) rate = std::max(gen.gamma_down + gen.gamma_up, 1.0);
  double lo = 0.0;
  double s_lo = state.norm_sq();
  double hi = std::min(-std::log(u) / rate, t_max);
  double s_hi = survival_probability(state, gen, hi);
  for (int k = 0; s_hi > u; ++k) {
    if (hi >= t_max || k > 2000) fail("could not bracket root", lo, hi, s_lo, s_hi, u);
    lo = hi;
    s_lo = s_hi;
    hi = std::min(2.0 * hi, t_max);
    s_hi = survival_probability(state, gen, hi);
  }
  if (!(s_lo >= u)) fail("survival below threshold at bracket start", lo, hi, s_lo, s_hi, u);
  if (std::abs(s_hi - u) < kTolerance) return {true, hi};

  // Newton on S(t) - u with S'(t) = -jump weight, falling back to bisection
  // whenever the step leaves the bracket.
  double x = lo + (hi - lo) * (s_lo - u) / (s_lo - s_hi);
  for (int iter = 0; iter < 300; ++iter) {
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const auto ev = evaluate(state, gen, x);
    const double f = ev.survival - u;
    if (std::abs(f) < kTolerance) return {true, x};
    if (f > 0.0) {
      lo = x;
      s_lo = ev.survival;
    } else {
      hi = x;
      s_hi = ev.survival;
    }
    if (std::nextafter(lo, hi) >= hi) {
      // Bracket exhausted at double resolution; the root is pinned to one ulp.
      if (s_lo >= u && s_hi <= u) return {true, std::abs(s_lo - u) < std::abs(s_hi - u) ? lo : hi};
      fail("non-monotonic survival", lo, hi, s_lo, s_hi, u);
    }
    x = ev.weight > 0.0 ? x + f / ev.weight : 0.5 * (lo + hi);
  }
  fail("no convergence", lo, hi, s_lo, s_hi, u);
}

JumpTime sample_jump_time(const ConditionalState2& state, const Generator2& gen, Rng& rng,
                          double t_max) {
  return solve_jump_time(state, gen, rng.uniform_open(), t_max);
}

JumpKind select_jump_type(const ConditionalState2& state, double gamma_down, double gamma_up,
                          Rng& rng) {
  const double w_down = gamma_down * std::norm(state.amp_upper);
  const double w_up = gamma_up * std::norm(state.amp_lower);
  const double total = w_down + w_up;
  if (!(total > 0.0)) {
    throw std::logic_error("jump selected but no decay channel is open");
  }
  return rng.uniform_open() * total < w_down ? JumpKind::Down : JumpKind::Up;
}

}  // namespace thermjump
