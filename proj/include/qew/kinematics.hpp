#pragma once

namespace qew::kin {

inline constexpr double kHbarC_eV_nm = 197.327;
inline constexpr double kElectronRest_keV = 510.999;
inline constexpr double kSpeedOfLight = 299792458.0; // m/s

struct ElectronParams {
  double kinetic_energy = 0.0; // keV
  double rest_energy = kElectronRest_keV; // keV
  double gamma = 1.0;
  double velocity_fraction = 0.0; // v/c
  double momentum_times_c = 0.0; // keV
};

// Throws DomainError for KE <= 0 or non-finite input.
ElectronParams electron_from_voltage(double kinetic_energy_keV, double rest_energy_keV = kElectronRest_keV);
// Inverse: kinetic energy for a given v/c in (0, 1). Throws DomainError otherwise.
ElectronParams electron_from_velocity(double velocity_fraction, double rest_energy_keV = kElectronRest_keV);

enum class BandwidthConvention { half_width, full_width };

// z = hbar c * 2 (E0^2 - Er^2)^{3/2} / (Er^2 dE^2) in mm, E0 the total energy.
// With full_width, the given bandwidth is halved first. Returns +inf for dE = 0.
double dispersion_distance(const ElectronParams& e, double bandwidth_eV,
                           BandwidthConvention convention = BandwidthConvention::half_width);

struct Deflection {
  double theta_f = 0.0;         // rad
  double displacement_nm = 0.0; // theta_f L / 2
};

// theta_f = alpha 2 hbar w / (v P) = alpha 2 hbar w / (gamma beta^2 Er).
Deflection deflection(const ElectronParams& e, double alpha_mag, double photon_energy_eV, double length_um);

} // namespace qew::kin
