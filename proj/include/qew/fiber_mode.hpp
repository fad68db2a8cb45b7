#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qew::fiber {

// Step-index fiber, HE11 mode. Lengths: nm unless the name says otherwise.
struct FiberSpec {
  double vacuum_wavelength_nm = 1064.0;
  double core_index = 2.0;
  double clad_index = 1.0;
  double core_radius_nm = 231.5;
  double length_um = 100.0;
  // Mirror cavity instead of a periodic section: effective length L sqrt(2).
  bool standing_wave = false;

  void validate() const; // throws DomainError
  [[nodiscard]] double k0_per_nm() const;
  [[nodiscard]] double v_number() const;
};

struct FiberMode {
  double beta_per_nm = 0.0;
  double u = 0.0; // a sqrt(k_in^2 - beta^2)
  double w = 0.0; // a sqrt(beta^2 - k_out^2)
  // E_z = A1 J1(u r/a) sin(phi) inside, B1 K1(w r/a) sin(phi) outside;
  // H_z = F1 J1(u r/a) cos(phi) inside, G1 K1(w r/a) cos(phi) outside.
  // SI field units (V/m, A/m); A1 = 1 before normalisation.
  double A1 = 1.0, B1 = 0.0, F1 = 0.0, G1 = 0.0;
  double phase_velocity_fraction = 0.0; // (omega/beta)/c
  double residual = 0.0; // |LHS - RHS| / max(1, |LHS|, |RHS|) of the characteristic equation
  bool normalized = false;
};

// Relative residual of the l = 1 characteristic equation at (u, w).
double characteristic_residual(const FiberSpec& spec, double u, double w);

// Fundamental (largest beta) root; throws NumericalError if none is found.
FiberMode solve_he11(const FiberSpec& spec);

enum class Component { Ez, Ephi, Er, Hz, Hr, Hphi };

// Physical field Re[phasor e^{i omega t}] at z = 0. Longitudinal components
// vary as cos(omega t), transverse ones as sin(omega t).
double field_at(const FiberMode& mode, const FiberSpec& spec, double r_nm, double phi, Component c,
                double omega_t = 0.0);

// Time-averaged energy per unit length (J/m) of the mode as scaled.
double energy_per_length(const FiberMode& mode, const FiberSpec& spec);

// Rescales A1..G1 so the energy over the (effective) length equals hbar omega.
FiberMode normalize_per_photon(const FiberMode& mode, const FiberSpec& spec);

// E_z at r = a+ on the sin(phi) = 1 line, V/m.
double surface_field(const FiberMode& mode);

struct CoherenceLength {
  double raw_um = 0.0;
  bool capped = false; // raw value above kCoherenceCapUm (or infinite)
  [[nodiscard]] double reported_um() const;
};

inline constexpr double kCoherenceCapUm = 1e4;

struct CouplingResult {
  double alpha_max = 0.0;
  double surface_field_per_photon = 0.0; // V/m
  double decay_length_nm = 0.0;
  std::optional<double> phase_matched_voltage_kV; // empty when omega/beta >= c
  CoherenceLength coherence_200keV;
  CoherenceLength coherence_300keV;
};

// L_c = pi / |omega / v_e - beta|.
CoherenceLength coherence_length(const FiberMode& mode, const FiberSpec& spec, double kinetic_energy_keV);
// Distance outside the core where K1 falls by 1/e.
double decay_length(const FiberMode& mode, const FiberSpec& spec);

CouplingResult coupling_alpha_max(const FiberMode& normalized_mode, const FiberSpec& spec);

struct SweepRow {
  double diameter_nm = 0.0;
  std::optional<FiberMode> mode;
  std::optional<CouplingResult> coupling;
  std::string error; // set when the row failed
};

std::vector<SweepRow> sweep_diameter(const FiberSpec& spec_template, const std::vector<double>& diameters_nm);

// Diameter in [lo, hi] where omega/beta equals the electron velocity.
// Throws NumericalError if the window does not bracket it.
double phase_matching_diameter(const FiberSpec& spec_template, double kinetic_energy_keV, double lo_nm = 50.0,
                               double hi_nm = 2000.0);

} // namespace qew::fiber
