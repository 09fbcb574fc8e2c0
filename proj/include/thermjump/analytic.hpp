#pragma once

// Closed-form and lowest-order results for the selected-mode jump rates:
// integrated populations/coherences after a jump, anomalous-jump
// probabilities, photon-number jump rates, their detailed-balance stationary
// distribution, and the sum of the rates over all reservoir modes.

#include <array>
#include <vector>

#include "thermjump/physics.hpp"

namespace thermjump {

/// Preparation of the manifold amplitudes: `e` after an up-jump, `g` after
/// a down-jump.
enum class Prepared { e, g };

/// Time integrals over [t_k, inf) of |Ce|^2, |Cg|^2 and Re/Im(Ce Cg*).
struct RateSolution {
  double w_e = 0.0;
  double w_g = 0.0;
  double u_int = 0.0;
  double v_int = 0.0;

  std::array<double, 4> as_array() const { return {w_e, w_g, u_int, v_int}; }
};

/// Residual vector of the four Laplace-domain balance equations at `x`.
std::array<double, 4> wuv_residual(const PhysicalParams& params, const SelectedMode& mode,
                                   int n_index, Prepared prep, const RateSolution& x);

/// Exact solution of the four balance equations by Gaussian elimination with
/// partial pivoting. Throws std::runtime_error on a singular system.
RateSolution solve_wuv(const PhysicalParams& params, const SelectedMode& mode, int n_index,
                       Prepared prep);

/// Exact probability that the next jump repeats the preparing jump:
/// Gamma_up W_g for prep = e, Gamma_down W_e for prep = g.
double anomalous_probability(const PhysicalParams& params, const SelectedMode& mode,
                             int n_index, Prepared prep);

/// Normalized Lorentzian of half-width (Gamma_down + Gamma_up)/2 at `detuning`.
double lorentzian(const PhysicalParams& params, double detuning);

/// Lowest-order-in-coupling anomalous probability,
/// L(dw) 2 pi |kappa|^2 (n+1) / Gamma_down (prep = e) or / Gamma_up (prep = g).
double lowest_order_probability(const PhysicalParams& params, const SelectedMode& mode,
                                int n_index, Prepared prep);

struct PhotonJumpRates {
  double gamma_up = 0.0;
  double gamma_down = 0.0;
};

/// Unconditional rates at which the selected mode gains/loses a photon when
/// it holds `n_photons`.
PhotonJumpRates photon_jump_rates(const PhysicalParams& params, const SelectedMode& mode,
                                  int n_photons);

double bose_einstein_pmf(double nbar, int n);

/// Stationary photon-number distribution of the birth-death chain with
/// photon_jump_rates, by the detailed-balance recursion, on 0..n_max.
/// Throws std::invalid_argument if the rates vanish or the mass beyond n_max
/// exceeds 1e-12.
std::vector<double> stationary_from_rates(const PhysicalParams& params,
                                          const SelectedMode& mode, int n_max);

struct ModeSumQuadrature {
  double half_width_multiplier = 200.0;  // window = +/- multiplier * half-width
  int node_count = 4096;
  bool tail_correction = true;
};

/// Named by the atomic jump each sum reproduces: sum_down adds the photon
/// gain rates of all modes and should equal Gamma_down p_e; sum_up adds the
/// photon loss rates and should equal Gamma_up p_g. A zero target is compared
/// in absolute terms.
struct ModeSumResult {
  double sum_up = 0.0;
  double sum_down = 0.0;
  double target_up = 0.0;
  double target_down = 0.0;
  double rel_err_up = 0.0;
  double rel_err_down = 0.0;
  double quadrature_error = 0.0;
};

/// Integrates the photon jump rates over detuning with a flat density of
/// states, the coupling normalized so that the mode sum of
/// 2 pi rho |kappa|^2 equals the golden-rule A, and N replaced by nbar.
/// The window is integrated with composite 15-point Gauss-Kronrod panels in
/// the variable arctan(dw / half-width); with tail_correction the exact Lorentzian mass outside the window is
/// added.
ModeSumResult mode_sum_check(const PhysicalParams& params, const ModeSumQuadrature& quad);

/// Same, with A from the golden-rule quadrature and nbar from the Planck
/// occupation of ctx.
ModeSumResult mode_sum_check(const PlanckContext& ctx, const ModeSumQuadrature& quad,
                             int angular_order = 8);

}  // namespace thermjump
