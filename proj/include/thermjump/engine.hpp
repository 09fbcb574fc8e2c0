#pragma once

// Monte-Carlo wavefunction core for a two-amplitude conditional state.
//
// Between jumps the unnormalized amplitudes obey dC/dt = M C with
//
//     M = [ decay_upper     coupling_upper ]
//         [ coupling_lower  decay_lower    ]
//
// and the squared norm of C is the probability that no jump has occurred.
// Jump times are drawn by inverting that survival curve against a uniform
// threshold; jump types are drawn from the weighted populations.

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

#include "thermjump/physics.hpp"
#include "thermjump/record.hpp"
#include "thermjump/rng.hpp"

namespace thermjump {

using cplx = std::complex<double>;

struct ConditionalState2 {
  cplx amp_upper{0.0, 0.0};
  cplx amp_lower{0.0, 0.0};

  double norm_sq() const { return std::norm(amp_upper) + std::norm(amp_lower); }
  ConditionalState2 normalized() const;

  friend bool operator==(const ConditionalState2&, const ConditionalState2&) = default;
};

/// Generator of the no-jump evolution. The decay channels are kept alongside
/// the matrix entries so that survival and jump selection can be evaluated
/// without re-deriving them.
struct Generator2 {
  cplx decay_upper{0.0, 0.0};     // -(Gamma_down - i*detuning)/2
  cplx decay_lower{0.0, 0.0};     // -(Gamma_up + i*detuning)/2
  cplx coupling_upper{0.0, 0.0};  // d(upper)/dt gets coupling_upper * lower
  cplx coupling_lower{0.0, 0.0};  // d(lower)/dt gets coupling_lower * upper
  double gamma_down = 0.0;
  double gamma_up = 0.0;

  /// Thermal generator with detuning and a symmetric coupling (used for both
  /// off-diagonal entries).
  static Generator2 thermal(const JumpRates& rates, double detuning, cplx coupling);

  /// Throws std::invalid_argument on non-finite entries or a positive real
  /// part on the diagonal.
  void validate() const;
};

/// Dense 2x2 complex matrix, row major.
struct Matrix2 {
  std::array<cplx, 4> m{};

  cplx operator()(int row, int col) const { return m[static_cast<std::size_t>(2 * row + col)]; }
  cplx& operator()(int row, int col) { return m[static_cast<std::size_t>(2 * row + col)]; }

  static Matrix2 identity() { return {{cplx{1.0}, cplx{}, cplx{}, cplx{1.0}}}; }
  ConditionalState2 apply(const ConditionalState2& s) const {
    return {m[0] * s.amp_upper + m[1] * s.amp_lower, m[2] * s.amp_upper + m[3] * s.amp_lower};
  }
  friend Matrix2 operator*(const Matrix2& a, const Matrix2& b);
};

/// exp(M t). Written as exp(mean*t) [cosh(delta*t) I + t sinhc(delta*t) (M - mean I)]
/// where delta^2 = ((a-b)/2)^2 + c c'; this form is regular through the
/// degenerate point delta = 0. When |Re(delta) t| is large the two
/// eigen-exponentials are formed separately instead, which avoids overflow
/// of cosh against underflow of exp(mean*t).
Matrix2 closed_form_propagator(const Generator2& gen, double t);

/// Squared norm at time t of the state propagated from `state`.
double survival_probability(const ConditionalState2& state, const Generator2& gen, double t);

/// Instantaneous total jump rate weight Gamma_down|upper|^2 + Gamma_up|lower|^2.
double jump_weight(const ConditionalState2& state, double gamma_down, double gamma_up);

struct JumpTime {
  bool jumped = false;
  double time = 0.0;  // jump instant if jumped, else the horizon t_max
};

/// Thrown when the waiting-time root cannot be bracketed or refined; the
/// message carries the bracket and residuals.
class RootFindError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Draw u ~ U(0,1); return NoJump if the survival at t_max exceeds u, else
/// the root of survival(t) = u to residual < 1e-12. `state` must be normalized.
JumpTime sample_jump_time(const ConditionalState2& state, const Generator2& gen, Rng& rng,
                          double t_max);

/// Same with an explicit threshold u in (0, 1).
JumpTime solve_jump_time(const ConditionalState2& state, const Generator2& gen, double u,
                         double t_max);

/// Down with probability Gamma_down|upper|^2 / (Gamma_down|upper|^2 + Gamma_up|lower|^2).
/// Throws std::logic_error if both weighted channels vanish.
JumpKind select_jump_type(const ConditionalState2& state, double gamma_down, double gamma_up,
                          Rng& rng);

}  // namespace thermjump
