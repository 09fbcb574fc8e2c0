#include "thermjump/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace thermjump {

namespace {

using Matrix4 = std::array<std::array<double, 4>, 4>;

struct LinearSystem {
  Matrix4 a{};
  std::array<double, 4> b{};
};

// Unknowns (W_e, W_g, U, V); rows are the transformed equations for
// |Ce|^2, |Cg|^2, Re(Ce Cg*), Im(Ce Cg*), integrated from the preparation to
// infinity (boundary term minus the initial value).
LinearSystem balance_system(const PhysicalParams& params, const SelectedMode& mode,
                            int n_index, Prepared prep) {
  mode.validate();
  if (n_index < 0) throw std::invalid_argument("n_index must be >= 0");
  const double gd = params.gamma_down();
  const double gu = params.gamma_up();
  const double half_sum = 0.5 * (gd + gu);
  const double dw = mode.detuning;
  const double g = mode.coupling_mag * std::sqrt(static_cast<double>(n_index + 1));

  LinearSystem sys;
  sys.a[0] = {-gd, 0.0, 0.0, -2.0 * g};
  sys.a[1] = {0.0, -gu, 0.0, 2.0 * g};
  sys.a[2] = {g, -g, dw, -half_sum};
  sys.a[3] = {0.0, 0.0, -half_sum, -dw};
  sys.b = {prep == Prepared::e ? -1.0 : 0.0, prep == Prepared::g ? -1.0 : 0.0, 0.0, 0.0};
  return sys;
}

std::array<double, 4> gauss_solve(Matrix4 a, std::array<double, 4> b) {
  double scale = 0.0;
  for (const auto& row : a) {
    for (double v : row) scale = std::max(scale, std::abs(v));
  }
  if (scale == 0.0) throw std::runtime_error("balance system is singular");
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) <= 1e-14 * scale) {
      throw std::runtime_error("balance system is singular");
    }
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (int r = col + 1; r < 4; ++r) {
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::array<double, 4> x{};
  for (int r = 3; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < 4; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return x;
}

}  // namespace

std::array<double, 4> wuv_residual(const PhysicalParams& params, const SelectedMode& mode,
                                   int n_index, Prepared prep, const RateSolution& x) {
  const auto sys = balance_system(params, mode, n_index, prep);
  const auto v = x.as_array();
  std::array<double, 4> r{};
  for (int i = 0; i < 4; ++i) {
    double s = -sys.b[i];
    for (int j = 0; j < 4; ++j) s += sys.a[i][j] * v[j];
    r[i] = s;
  }
  return r;
}

RateSolution solve_wuv(const PhysicalParams& params, const SelectedMode& mode, int n_index,
                       Prepared prep) {
  const auto sys = balance_system(params, mode, n_index, prep);
  const auto x = gauss_solve(sys.a, sys.b);
  return {x[0], x[1], x[2], x[3]};
}

double anomalous_probability(const PhysicalParams& params, const SelectedMode& mode,
                             int n_index, Prepared prep) {
  const auto sol = solve_wuv(params, mode, n_index, prep);
  return prep == Prepared::e ? params.gamma_up() * sol.w_g : params.gamma_down() * sol.w_e;
}

double lorentzian(const PhysicalParams& params, double detuning) {
  const double hw = 0.5 * (params.gamma_down() + params.gamma_up());
  return hw / std::numbers::pi / (hw * hw + detuning * detuning);
}

double lowest_order_probability(const PhysicalParams& params, const SelectedMode& mode,
                                int n_index, Prepared prep) {
  mode.validate();
  if (n_index < 0) throw std::invalid_argument("n_index must be >= 0");
  const double rate = prep == Prepared::e ? params.gamma_down() : params.gamma_up();
  if (!(rate > 0.0)) throw std::domain_error("preparing rate is zero");
  const double k2 = mode.coupling_mag * mode.coupling_mag;
  return lorentzian(params, mode.detuning) * 2.0 * std::numbers::pi * k2 *
         static_cast<double>(n_index + 1) / rate;
}

PhotonJumpRates photon_jump_rates(const PhysicalParams& params, const SelectedMode& mode,
                                  int n_photons) {
  mode.validate();
  if (n_photons < 0) throw std::invalid_argument("photon number must be >= 0");
  const auto [p_g, p_e] = equilibrium_populations(params);
  const double base = lorentzian(params, mode.detuning) * 2.0 * std::numbers::pi *
                      mode.coupling_mag * mode.coupling_mag;
  const double n = static_cast<double>(n_photons);
  return {base * (n + 1.0) * p_e, base * n * p_g};
}

double bose_einstein_pmf(double nbar, int n) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
    throw std::invalid_argument("nbar must be finite and >= 0");
  }
  if (n < 0) throw std::invalid_argument("photon number must be >= 0");
  if (nbar == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::pow(nbar / (nbar + 1.0), n) / (nbar + 1.0);
}

std::vector<double> stationary_from_rates(const PhysicalParams& params,
                                          const SelectedMode& mode, int n_max) {
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  if (!(mode.coupling_mag > 0.0)) {
    throw std::invalid_argument("zero coupling: photon jump rates vanish");
  }
  std::vector<double> p(static_cast<std::size_t>(n_max) + 1);
  p[0] = 1.0;
  double ratio = 0.0;
  for (int n = 0; n < n_max; ++n) {
    const double up = photon_jump_rates(params, mode, n).gamma_up;
    const double down = photon_jump_rates(params, mode, n + 1).gamma_down;
    ratio = up / down;
    p[static_cast<std::size_t>(n) + 1] = p[static_cast<std::size_t>(n)] * ratio;
  }
  if (n_max == 0) {
    ratio = photon_jump_rates(params, mode, 0).gamma_up /
            photon_jump_rates(params, mode, 1).gamma_down;
  }
  if (!(ratio < 1.0)) {
    throw std::invalid_argument("photon-number chain is not normalizable");
  }
  double total = 0.0;
  for (double v : p) total += v;
  const double tail = p.back() * ratio / (1.0 - ratio);
  if (tail > 1e-12 * total) {
    throw std::invalid_argument("n_max too small: tail mass exceeds 1e-12");
  }
  for (double& v : p) v /= total;
  return p;
}

ModeSumResult mode_sum_check(const PhysicalParams& params, const ModeSumQuadrature& quad) {
  if (!(quad.half_width_multiplier > 0.0) || !std::isfinite(quad.half_width_multiplier)) {
    throw std::invalid_argument("half_width_multiplier must be finite and > 0");
  }
  if (quad.node_count < 15) throw std::invalid_argument("node_count must be >= 15");

  const auto [p_g, p_e] = equilibrium_populations(params);
  const double hw = 0.5 * (params.gamma_down() + params.gamma_up());
  const double a = params.a_coeff();
  const double nbar = params.nbar();

  // Per unit detuning the modes contribute 2 pi rho |kappa|^2 = A; the
  // photon rates then carry the Lorentzian and the mean occupation.
  auto gain = [&](double dw) { return a * lorentzian(params, dw) * (nbar + 1.0) * p_e; };
  auto loss = [&](double dw) { return a * lorentzian(params, dw) * nbar * p_g; };

  // Integrate in theta = arctan(dw / hw), where dw = hw tan(theta) and
  // d(dw)/d(theta) = hw / cos^2(theta); panels are uniform in theta.
  auto mapped = [hw](auto f) {
    return [f, hw](double theta) {
      const double c = std::cos(theta);
      return f(hw * std::tan(theta)) * hw / (c * c);
    };
  };
  const auto gain_t = mapped(gain);
  const auto loss_t = mapped(loss);
  const int panels = quad.node_count / 15;
  const double theta_max = std::atan(quad.half_width_multiplier);
  double sum_down = 0.0;
  double sum_up = 0.0;
  double err_total = 0.0;
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  for (int k = 0; k < panels; ++k) {
    const double t0 = -theta_max + 2.0 * theta_max * k / panels;
    const double t1 = -theta_max + 2.0 * theta_max * (k + 1) / panels;
    double err = 0.0;
    sum_down += GK::integrate(gain_t, t0, t1, 0, 0.0, &err);
    err_total += err;
    sum_up += GK::integrate(loss_t, t0, t1, 0, 0.0, &err);
    err_total += err;
  }
  if (quad.tail_correction) {
    const double outside = 1.0 - 2.0 * theta_max / std::numbers::pi;
    sum_down += a * outside * (nbar + 1.0) * p_e;
    sum_up += a * outside * nbar * p_g;
  }

  ModeSumResult r;
  r.sum_up = sum_up;
  r.sum_down = sum_down;
  r.target_up = params.gamma_up() * p_g;
  r.target_down = params.gamma_down() * p_e;
  auto rel = [](double value, double target) {
    return target == 0.0 ? std::abs(value) : std::abs(value - target) / std::abs(target);
  };
  r.rel_err_up = rel(sum_up, r.target_up);
  r.rel_err_down = rel(sum_down, r.target_down);
  r.quadrature_error = err_total;
  return r;
}

ModeSumResult mode_sum_check(const PlanckContext& ctx, const ModeSumQuadrature& quad,
                             int angular_order) {
  const double a = golden_rule_a(ctx, angular_order);
  const double nbar = mean_photon_number(ctx.omega0, ctx.temperature, ctx.units);
  return mode_sum_check(PhysicalParams(a, nbar), quad);
}

}  // namespace thermjump
