#include "qew/kinematics.hpp"

#include "qew/error.hpp"

#include <cmath>
#include <limits>

namespace qew::kin {

ElectronParams electron_from_voltage(double kinetic_energy_keV, double rest_energy_keV) {
  if (!(kinetic_energy_keV > 0.0) || !std::isfinite(kinetic_energy_keV)) {
    throw DomainError("kinetic energy must be finite and > 0");
  }
  if (!(rest_energy_keV > 0.0) || !std::isfinite(rest_energy_keV)) {
    throw DomainError("rest energy must be finite and > 0");
  }
  ElectronParams e;
  e.kinetic_energy = kinetic_energy_keV;
  e.rest_energy = rest_energy_keV;
  e.gamma = 1.0 + kinetic_energy_keV / rest_energy_keV;
  // 1 - 1/gamma^2 written without cancellation for small KE.
  const double t = kinetic_energy_keV / rest_energy_keV;
  e.velocity_fraction = std::sqrt(t * (t + 2.0)) / (1.0 + t);
  e.momentum_times_c = std::sqrt(kinetic_energy_keV * (kinetic_energy_keV + 2.0 * rest_energy_keV));
  return e;
}

ElectronParams electron_from_velocity(double velocity_fraction, double rest_energy_keV) {
  if (!(velocity_fraction > 0.0 && velocity_fraction < 1.0)) throw DomainError("v/c must lie in (0, 1)");
  const double b2 = velocity_fraction * velocity_fraction;
  // gamma - 1 = b^2 / (sqrt(1-b^2) (1 + sqrt(1-b^2)))
  const double root = std::sqrt(1.0 - b2);
  return electron_from_voltage(rest_energy_keV * b2 / (root * (1.0 + root)), rest_energy_keV);
}

double dispersion_distance(const ElectronParams& e, double bandwidth_eV, BandwidthConvention convention) {
  if (!(bandwidth_eV >= 0.0)) throw DomainError("bandwidth must be >= 0");
  const double de = convention == BandwidthConvention::full_width ? 0.5 * bandwidth_eV : bandwidth_eV;
  if (de == 0.0) return std::numeric_limits<double>::infinity();
  const double rest = e.rest_energy * 1e3; // eV
  const double pc = e.momentum_times_c * 1e3;
  const double z_nm = kHbarC_eV_nm * 2.0 * pc * pc * pc / (rest * rest * de * de);
  return z_nm * 1e-6;
}

Deflection deflection(const ElectronParams& e, double alpha_mag, double photon_energy_eV, double length_um) {
  if (!(alpha_mag >= 0.0) || !(photon_energy_eV > 0.0) || !(length_um >= 0.0)) {
    throw DomainError("deflection: alpha >= 0, photon energy > 0 and length >= 0 required");
  }
  const double b = e.velocity_fraction;
  const double theta = alpha_mag * 2.0 * photon_energy_eV / (e.gamma * b * b * e.rest_energy * 1e3);
  return {theta, 0.5 * theta * length_um * 1e3};
}

} // namespace qew::kin
