#pragma once

// Physical parameters for a two-state atom in thermal equilibrium with
// Planck radiation, and the closed-form Einstein/Planck relations used by
// every simulator in this library.
//
// Unless stated otherwise rates are measured in units of the spontaneous
// emission rate A and times in units of 1/A.

#include <utility>

namespace thermjump {

/// Thermal up/down jump rates of the atom.
struct JumpRates {
  double gamma_down = 0.0;
  double gamma_up = 0.0;
};

/// Atom/reservoir parameters. Immutable once constructed; the Einstein rates
/// are derived from (A, nbar) at construction so that
/// gamma_down - gamma_up == a_coeff holds exactly.
class PhysicalParams {
 public:
  /// Throws std::invalid_argument unless a_coeff > 0, nbar >= 0, drive >= 0
  /// and all are finite.
  PhysicalParams(double a_coeff, double nbar, double drive = 0.0);

  double a_coeff() const { return a_coeff_; }
  double nbar() const { return nbar_; }
  double gamma_down() const { return gamma_down_; }
  double gamma_up() const { return gamma_up_; }
  double drive() const { return drive_; }
  JumpRates rates() const { return {gamma_down_, gamma_up_}; }

  PhysicalParams with_drive(double drive) const { return {a_coeff_, nbar_, drive}; }

 private:
  double a_coeff_;
  double nbar_;
  double drive_;
  double gamma_down_;
  double gamma_up_;
};

/// One reservoir mode singled out and treated as part of the system.
/// The coupling phase is kept for bookkeeping only: it is removed from the
/// amplitude equations by a gauge transformation and never enters dynamics.
struct SelectedMode {
  double coupling_mag = 0.0;
  double detuning = 0.0;
  double phase = 0.0;

  /// Throws std::invalid_argument if coupling_mag < 0 or any field is
  /// non-finite.
  void validate() const;
};

/// Physical constants of the unit system used by PlanckContext.
struct UnitSystem {
  double hbar = 1.0;
  double c = 1.0;
  double eps0 = 1.0;
  double k_b = 1.0;

  static UnitSystem natural() { return {}; }
  static UnitSystem si();
};

struct PlanckContext {
  double omega0 = 1.0;
  double temperature = 1.0;
  double volume = 1.0;
  double dipole_mag = 1.0;
  UnitSystem units = UnitSystem::natural();

  /// Throws std::invalid_argument unless omega0, temperature and volume are
  /// strictly positive and dipole_mag is non-negative.
  void validate() const;
};

struct PlanckQuantities {
  double mode_density = 0.0;    // rho(omega0), modes per unit angular frequency in V
  double energy_density = 0.0;  // sigma(omega0)
  double b_over_a = 0.0;
};

/// Thermal occupation 1/(exp(x) - 1), x = hbar*omega0/(k_B*T), taking the
/// T = 0 limit explicitly.
double mean_photon_number(double omega0, double temperature,
                          const UnitSystem& units = UnitSystem::natural());

/// Same, from the dimensionless ratio x = hbar*omega0/(k_B*T); x = +inf gives 0.
double mean_photon_number_from_ratio(double x);

/// Gamma_down = A (nbar + 1), Gamma_up = A nbar.
JumpRates einstein_rates(double a_coeff, double nbar);

/// Stationary populations (p_g, p_e) of the two-state rate equations.
std::pair<double, double> equilibrium_populations(double gamma_down, double gamma_up);
std::pair<double, double> equilibrium_populations(const PhysicalParams& params);

PlanckQuantities planck_quantities(const PlanckContext& ctx);

/// Spontaneous emission rate from the golden rule, summing |kappa|^2 over two
/// transverse polarizations and integrating over propagation directions by
/// product Gauss-Legendre (polar) x trapezoid (azimuth) quadrature of the
/// given order. The result is checked against a doubled-order evaluation and
/// a std::runtime_error carrying the achieved error estimate is thrown if the
/// two disagree beyond 1e-10 relative.
double golden_rule_a(const PlanckContext& ctx, int quadrature_order);

/// A = omega0^3 |d|^2 / (3 pi eps0 hbar c^3).
double golden_rule_a_closed_form(const PlanckContext& ctx);

/// Sum over polarizations and directions of |e . d|^2 for a unit-free dipole
/// vector d, evaluated with the same quadrature as golden_rule_a.
double polarization_sum_integral(const double (&dipole)[3], int quadrature_order);

}  // namespace thermjump
