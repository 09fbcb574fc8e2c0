#include "thermjump/physics.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/legendre.hpp>

namespace thermjump {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be finite");
  }
}

struct Node {
  double x;
  double w;
};

std::vector<Node> gauss_legendre(int order) {
  std::vector<Node> nodes;
  nodes.reserve(static_cast<std::size_t>(order));
  for (double z : boost::math::legendre_p_zeros<double>(order)) {
    const double dp = boost::math::legendre_p_prime(order, z);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    nodes.push_back({z, w});
    if (z != 0.0) nodes.push_back({-z, w});
  }
  return nodes;
}

// Integral over the sphere of sum_lambda |e_lambda(n) . d|^2, with the two
// transverse polarizations theta-hat and phi-hat.
double sphere_polarization_sum(const std::array<double, 3>& d, int order) {
  const auto polar = gauss_legendre(order);
  const int n_phi = 2 * order;
  const double dphi = 2.0 * std::numbers::pi / n_phi;
  double total = 0.0;
  for (const auto& [cos_t, w] : polar) {
    const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
    double ring = 0.0;
    for (int k = 0; k < n_phi; ++k) {
      const double phi = k * dphi;
      const double cp = std::cos(phi);
      const double sp = std::sin(phi);
      const double e_theta = cos_t * cp * d[0] + cos_t * sp * d[1] - sin_t * d[2];
      const double e_phi = -sp * d[0] + cp * d[1];
      ring += e_theta * e_theta + e_phi * e_phi;
    }
    total += w * ring * dphi;
  }
  return total;
}

// Generic dipole orientation; the result is orientation independent, and a
// tilted axis keeps the quadrature honest.
constexpr std::array<double, 3> kDipoleAxis{1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0};

}  // namespace

PhysicalParams::PhysicalParams(double a_coeff, double nbar, double drive)
    : a_coeff_(a_coeff), nbar_(nbar), drive_(drive) {
  require_finite(a_coeff, "a_coeff");
  require_finite(nbar, "nbar");
  require_finite(drive, "drive");
  if (!(a_coeff > 0.0)) throw std::invalid_argument("a_coeff must be > 0");
  if (nbar < 0.0) throw std::invalid_argument("nbar must be >= 0");
  if (drive < 0.0) throw std::invalid_argument("drive must be >= 0");
  const auto rates = einstein_rates(a_coeff_, nbar_);
  gamma_down_ = rates.gamma_down;
  gamma_up_ = rates.gamma_up;
}

void SelectedMode::validate() const {
  require_finite(coupling_mag, "coupling_mag");
  require_finite(detuning, "detuning");
  require_finite(phase, "phase");
  if (coupling_mag < 0.0) throw std::invalid_argument("coupling_mag must be >= 0");
}

UnitSystem UnitSystem::si() {
  return {1.054571817e-34, 299792458.0, 8.8541878128e-12, 1.380649e-23};
}

void PlanckContext::validate() const {
  require_finite(omega0, "omega0");
  require_finite(temperature, "temperature");
  require_finite(volume, "volume");
  require_finite(dipole_mag, "dipole_mag");
  if (!(omega0 > 0.0)) throw std::invalid_argument("omega0 must be > 0");
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be > 0");
  if (!(volume > 0.0)) throw std::invalid_argument("volume must be > 0");
  if (dipole_mag < 0.0) throw std::invalid_argument("dipole_mag must be >= 0");
  if (!(units.hbar > 0.0 && units.c > 0.0 && units.eps0 > 0.0 && units.k_b > 0.0)) {
    throw std::invalid_argument("unit constants must be > 0");
  }
}

double mean_photon_number_from_ratio(double x) {
  if (std::isnan(x)) throw std::invalid_argument("energy ratio is NaN");
  if (x <= 0.0) throw std::invalid_argument("energy ratio must be > 0");
  if (std::isinf(x)) return 0.0;
  return 1.0 / std::expm1(x);
}

double mean_photon_number(double omega0, double temperature, const UnitSystem& units) {
  require_finite(omega0, "omega0");
  require_finite(temperature, "temperature");
  if (!(omega0 > 0.0)) throw std::invalid_argument("omega0 must be > 0");
  if (temperature < 0.0) throw std::invalid_argument("temperature must be >= 0");
  if (temperature == 0.0) return 0.0;
  const double x = units.hbar * omega0 / (units.k_b * temperature);
  // exp overflows past ~709; the occupation is already zero in double there.
  if (x > 745.0) return 0.0;
  return mean_photon_number_from_ratio(x);
}

JumpRates einstein_rates(double a_coeff, double nbar) {
  require_finite(a_coeff, "a_coeff");
  require_finite(nbar, "nbar");
  if (!(a_coeff > 0.0)) throw std::invalid_argument("a_coeff must be > 0");
  if (nbar < 0.0) throw std::invalid_argument("nbar must be >= 0");
  // gamma_up + A rather than A*(nbar+1): the difference is then A up to the
  // rounding of one addition, and exactly A whenever that sum is exact.
  const double up = a_coeff * nbar;
  return {up + a_coeff, up};
}

std::pair<double, double> equilibrium_populations(double gamma_down, double gamma_up) {
  require_finite(gamma_down, "gamma_down");
  require_finite(gamma_up, "gamma_up");
  if (gamma_down < 0.0 || gamma_up < 0.0) {
    throw std::invalid_argument("rates must be >= 0");
  }
  const double total = gamma_down + gamma_up;
  if (total == 0.0) throw std::invalid_argument("both rates are zero");
  return {gamma_down / total, gamma_up / total};
}

std::pair<double, double> equilibrium_populations(const PhysicalParams& params) {
  return equilibrium_populations(params.gamma_down(), params.gamma_up());
}

PlanckQuantities planck_quantities(const PlanckContext& ctx) {
  ctx.validate();
  const auto& u = ctx.units;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double c3 = u.c * u.c * u.c;
  PlanckQuantities q;
  q.mode_density = ctx.omega0 * ctx.omega0 * ctx.volume / (pi2 * c3);
  const double nbar = mean_photon_number(ctx.omega0, ctx.temperature, u);
  q.energy_density = nbar * u.hbar * ctx.omega0 * q.mode_density / ctx.volume;
  q.b_over_a = pi2 * c3 / (u.hbar * ctx.omega0 * ctx.omega0 * ctx.omega0);
  return q;
}

double polarization_sum_integral(const double (&dipole)[3], int quadrature_order) {
  if (quadrature_order < 2) throw std::invalid_argument("quadrature_order must be >= 2");
  return sphere_polarization_sum({dipole[0], dipole[1], dipole[2]}, quadrature_order);
}

double golden_rule_a_closed_form(const PlanckContext& ctx) {
  ctx.validate();
  const auto& u = ctx.units;
  const double w3 = ctx.omega0 * ctx.omega0 * ctx.omega0;
  return w3 * ctx.dipole_mag * ctx.dipole_mag /
         (3.0 * std::numbers::pi * u.eps0 * u.hbar * u.c * u.c * u.c);
}

double golden_rule_a(const PlanckContext& ctx, int quadrature_order) {
  ctx.validate();
  if (quadrature_order < 2) throw std::invalid_argument("quadrature_order must be >= 2");
  const auto& u = ctx.units;
  const double mode_density = planck_quantities(ctx).mode_density;
  // Modes per unit frequency, per unit solid angle, per polarization.
  const double angular_density = mode_density / (8.0 * std::numbers::pi);
  // |kappa|^2 = omega0 |e . d|^2 / (2 hbar eps0 V); the direction sum is
  // carried by the quadrature.
  const double coupling_scale =
      ctx.omega0 * ctx.dipole_mag * ctx.dipole_mag / (2.0 * u.hbar * u.eps0 * ctx.volume);

  auto evaluate = [&](int order) {
    return 2.0 * std::numbers::pi * angular_density * coupling_scale *
           sphere_polarization_sum(kDipoleAxis, order);
  };
  const double a = evaluate(quadrature_order);
  const double check = evaluate(2 * quadrature_order);
  const double err = std::abs(a - check);
  if (err > 1e-10 * std::abs(check)) {
    std::ostringstream msg;
    msg << "golden-rule quadrature not converged at order " << quadrature_order
        << ": error estimate " << err;
    throw std::runtime_error(msg.str());
  }
  return a;
}

}  // namespace thermjump
