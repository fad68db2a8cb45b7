#include "qew/fiber_mode.hpp"

#include "qew/error.hpp"
#include "qew/kinematics.hpp"
#include "qew/parallel.hpp"
#include "qew/quadrature.hpp"
#include "qew/special_fn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace qew::fiber {

namespace {

using special::bessel_j;
using special::bessel_k_scaled;

constexpr double kHbar = 1.054571817e-34;
constexpr double kCharge = 1.602176634e-19;
constexpr double kEps0 = 8.8541878128e-12;
constexpr double kMu0 = 1.25663706212e-6;
constexpr double kC = 299792458.0;
constexpr double kPi = std::numbers::pi;

constexpr int kUniformScan = 2000;
constexpr double kAcceptResidual = 1e-8;

struct Geometry {
  double a;  // m
  double k0; // 1/m
  double k_in;
  double k_out;
  double v;     // V number
  double omega; // rad/s
};

Geometry geometry(const FiberSpec& spec) {
  const double k0 = 2.0 * kPi / (spec.vacuum_wavelength_nm * 1e-9);
  const double a = spec.core_radius_nm * 1e-9;
  return {a, k0, k0 * spec.core_index, k0 * spec.clad_index,
          a * k0 * std::sqrt((spec.core_index - spec.clad_index) * (spec.core_index + spec.clad_index)), k0 * kC};
}

double beta_of(const Geometry& g, double w) { return std::sqrt(g.k_out * g.k_out + (w / g.a) * (w / g.a)); }

double index_ratio2(const FiberSpec& spec) {
  const double r = spec.core_index / spec.clad_index;
  return r * r;
}

// u J1'(u) / J1(u) and w K1'(w) / K1(w).
double j_log_derivative(double u) { return u * bessel_j(0, u) / bessel_j(1, u) - 1.0; }
double k_log_derivative(double w) { return -w * bessel_k_scaled(0, w) / bessel_k_scaled(1, w) - 1.0; }

// The characteristic equation multiplied through by u^4 w^4 J1(u)^2, which
// removes the poles at zeros of J1, then divided by u^2 w^2 V^4 to lift the
// trivial roots at both ends of the range. Only its sign is used.
double bracketing_function(const FiberSpec& spec, const Geometry& g, double u, double w) {
  const double j1 = bessel_j(1, u);
  const double ju = u * bessel_j(0, u) - j1;
  const double kw = k_log_derivative(w);
  const double p1 = ju * w * w + j1 * kw * u * u;
  const double p2 = index_ratio2(spec) * ju * w * w + j1 * kw * u * u;
  const double b2 = (g.a * g.k_out) * (g.a * g.k_out);
  const double v2 = u * u + w * w;
  const double f = p1 * p2 - j1 * j1 * (1.0 + w * w / b2) * v2 * v2;
  return f / (u * u * w * w * v2 * v2);
}

double relative_residual(const FiberSpec& spec, const Geometry& g, double u, double w) {
  const double jhat = j_log_derivative(u) / (u * u);
  const double khat = k_log_derivative(w) / (w * w);
  const double lhs = (jhat + khat) * (index_ratio2(spec) * jhat + khat);
  const double beta = beta_of(g, w);
  const double s = 1.0 / (u * u) + 1.0 / (w * w);
  const double rhs = (beta / g.k_out) * (beta / g.k_out) * s * s;
  return std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

// Radial profile at r (m), for unit E and H coefficients in the region:
// f = Z1 and the two transverse combinations written through orders 0 and 2,
// df/dr = k (p0 Z0 + p2 Z2) / 2 and f/r = k (r0 Z0 + r2 Z2) / 2, which keeps
// the large 1/r^2 parts of the cladding fields from cancelling numerically.
struct Profile {
  double f, z0, z2, k, q, n;
  double p0, p2, r0, r2;
};

Profile profile(const FiberMode& m, const FiberSpec& spec, const Geometry& g, double r) {
  if (r <= g.a) {
    const double kappa = m.u / g.a;
    const double x = kappa * r;
    return {bessel_j(1, x), bessel_j(0, x), bessel_j(2, x), kappa, kappa * kappa, spec.core_index,
            1.0, -1.0, 1.0, 1.0};
  }
  const double gamma = m.w / g.a;
  const double x = gamma * r;
  // K_n(x) / K1(w) through the scaled functions, times J1(u) for continuity.
  const double scale = bessel_j(1, m.u) * std::exp(-(x - m.w)) / bessel_k_scaled(1, m.w);
  return {bessel_k_scaled(1, x) * scale, bessel_k_scaled(0, x) * scale, bessel_k_scaled(2, x) * scale,
          gamma, -gamma * gamma, spec.clad_index, -1.0, -1.0, -1.0, 1.0};
}

struct Amplitudes {
  double ez, ephi, er, hz, hr, hphi;
};

// Phasor magnitudes with the angular factors removed: Ez, Er, Hphi carry
// sin(phi); Ephi, Hz, Hr carry cos(phi).
Amplitudes amplitudes(const FiberMode& m, const FiberSpec& spec, const Geometry& g, double r) {
  const Profile p = profile(m, spec, g, r);
  const double beta = m.beta_per_nm * 1e9;
  const double ba = beta * m.A1;
  const double bh = beta * m.F1;
  const double mh = kMu0 * g.omega * m.F1;
  const double ea = kEps0 * p.n * p.n * g.omega * m.A1;
  const double c = 0.5 * p.k / p.q;
  // x fp - y f/r and x f/r - y fp with the order-0 and order-2 parts grouped.
  auto d_minus_r = [&](double x, double y) {
    return c * ((x * p.p0 - y * p.r0) * p.z0 + (x * p.p2 - y * p.r2) * p.z2);
  };
  auto r_minus_d = [&](double x, double y) {
    return c * ((x * p.r0 - y * p.p0) * p.z0 + (x * p.r2 - y * p.p2) * p.z2);
  };
  return {m.A1 * p.f, r_minus_d(ba, mh), d_minus_r(ba, mh), m.F1 * p.f, d_minus_r(bh, ea), -r_minus_d(bh, ea)};
}

double energy_density_radial(const FiberMode& m, const FiberSpec& spec, const Geometry& g, double r) {
  const Amplitudes f = amplitudes(m, spec, g, r);
  const double n = r <= g.a ? spec.core_index : spec.clad_index;
  const double e2 = f.ez * f.ez + f.ephi * f.ephi + f.er * f.er;
  const double h2 = f.hz * f.hz + f.hr * f.hr + f.hphi * f.hphi;
  return kEps0 * n * n * e2 + kMu0 * h2;
}

FiberMode mode_from_root(const FiberSpec& spec, const Geometry& g, double u, double w) {
  FiberMode m;
  m.u = u;
  m.w = w;
  const double beta = beta_of(g, w);
  m.beta_per_nm = beta * 1e-9;
  m.phase_velocity_fraction = g.k0 / beta;
  m.residual = relative_residual(spec, g, u, w);
  const double jhat = j_log_derivative(u) / (u * u);
  const double khat = k_log_derivative(w) / (w * w);
  m.A1 = 1.0;
  const double ratio = bessel_j(1, u) / (bessel_k_scaled(1, w) * std::exp(-w));
  m.B1 = m.A1 * ratio;
  m.F1 = beta * m.A1 * (1.0 / (u * u) + 1.0 / (w * w)) / (kMu0 * g.omega * (jhat + khat));
  m.G1 = m.F1 * ratio;
  return m;
}

} // namespace

void FiberSpec::validate() const {
  auto finite_pos = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!finite_pos(vacuum_wavelength_nm)) throw DomainError("vacuum wavelength must be > 0");
  if (!finite_pos(core_radius_nm)) throw DomainError("core radius must be > 0");
  if (!finite_pos(length_um)) throw DomainError("normalization length must be > 0");
  if (!(std::isfinite(clad_index) && clad_index >= 1.0)) throw DomainError("cladding index must be >= 1");
  if (!(std::isfinite(core_index) && core_index > clad_index)) {
    throw DomainError("core index must exceed the cladding index");
  }
}

double FiberSpec::k0_per_nm() const { return 2.0 * kPi / vacuum_wavelength_nm; }

double FiberSpec::v_number() const { return geometry(*this).v; }

double characteristic_residual(const FiberSpec& spec, double u, double w) {
  spec.validate();
  return relative_residual(spec, geometry(spec), u, w);
}

FiberMode solve_he11(const FiberSpec& spec) {
  spec.validate();
  const Geometry g = geometry(spec);
  const double v = g.v;

  // Points are angles theta with u = V sin(theta), w = V cos(theta): uniform
  // in beta, plus logarithmic clusters toward both ends where roots crowd.
  std::vector<double> thetas;
  thetas.reserve(kUniformScan + 400);
  for (int i = 0; i < kUniformScan; ++i) {
    const double beta = g.k_out + (g.k_in - g.k_out) * (i + 0.5) / kUniformScan;
    const double w = g.a * std::sqrt((beta - g.k_out) * (beta + g.k_out));
    const double u = g.a * std::sqrt((g.k_in - beta) * (g.k_in + beta));
    thetas.push_back(std::atan2(u, w));
  }
  for (int i = 0; i <= 200; ++i) {
    const double frac = std::pow(10.0, -1.0 - 11.0 * i / 200.0);
    thetas.push_back(std::atan2(std::sqrt(1.0 - frac * frac), frac)); // w = V frac
    if (i <= 100) thetas.push_back(std::atan2(frac, std::sqrt(1.0 - frac * frac))); // u = V frac, frac >= 1e-6
  }
  std::sort(thetas.begin(), thetas.end());
  thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());

  auto h = [&](double theta) { return bracketing_function(spec, g, v * std::sin(theta), v * std::cos(theta)); };

  double prev_t = thetas.front();
  double prev_h = h(prev_t);
  for (std::size_t i = 1; i < thetas.size(); ++i) {
    const double t = thetas[i];
    const double ht = h(t);
    if (std::isfinite(prev_h) && std::isfinite(ht) && (prev_h < 0.0) != (ht < 0.0)) {
      double lo = prev_t;
      double hi = t;
      double hlo = prev_h;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double hm = h(mid);
        if ((hm < 0.0) == (hlo < 0.0)) {
          lo = mid;
          hlo = hm;
        } else {
          hi = mid;
        }
      }
      const double root = std::abs(h(lo)) <= std::abs(h(hi)) ? lo : hi;
      const double u = v * std::sin(root);
      const double w = v * std::cos(root);
      if (relative_residual(spec, g, u, w) < kAcceptResidual) return mode_from_root(spec, g, u, w);
    }
    prev_t = t;
    prev_h = ht;
  }
  throw NumericalError("solve_he11: no HE11 root found (V = " + std::to_string(v) + ")");
}

double field_at(const FiberMode& mode, const FiberSpec& spec, double r_nm, double phi, Component c,
                double omega_t) {
  if (!(r_nm >= 0.0)) throw DomainError("field_at: r must be >= 0");
  const Geometry g = geometry(spec);
  const Amplitudes f = amplitudes(mode, spec, g, r_nm * 1e-9);
  const double s = std::sin(phi);
  const double co = std::cos(phi);
  const double ct = std::cos(omega_t);
  const double st = std::sin(omega_t);
  switch (c) {
  case Component::Ez: return f.ez * s * ct;
  case Component::Hz: return f.hz * co * ct;
  case Component::Er: return f.er * s * st;
  case Component::Ephi: return f.ephi * co * st;
  case Component::Hr: return f.hr * co * st;
  case Component::Hphi: return f.hphi * s * st;
  }
  return 0.0;
}

double energy_per_length(const FiberMode& mode, const FiberSpec& spec) {
  const Geometry g = geometry(spec);
  auto integrand = [&](double r) { return energy_density_radial(mode, spec, g, r) * r; };
  const quad::QuadResult inner = quad::integrate(integrand, 0.0, g.a, 1e-12);
  if (!inner.converged) throw NumericalError("energy_per_length: core quadrature did not converge");

  // Outside, segments of growing width in units of the decay scale a/w,
  // until the integrand drops below 1e-16 of its value at the surface.
  const double peak = std::abs(integrand(g.a * (1.0 + 1e-12)));
  const double scale = g.a / mode.w;
  double total = inner.value;
  double left = g.a;
  double width = std::min(scale, g.a);
  for (int seg = 0; seg < 200; ++seg) {
    const double right = left + width;
    const quad::QuadResult part = quad::integrate(integrand, left, right, 1e-12);
    if (!part.converged) throw NumericalError("energy_per_length: cladding quadrature did not converge");
    total += part.value;
    left = right;
    width *= 2.0;
    if (std::abs(integrand(left)) < 1e-16 * peak) return 0.25 * kPi * total;
  }
  throw NumericalError("energy_per_length: field does not decay outside the core");
}

FiberMode normalize_per_photon(const FiberMode& mode, const FiberSpec& spec) {
  spec.validate();
  const Geometry g = geometry(spec);
  const double length = spec.length_um * 1e-6 * (spec.standing_wave ? std::numbers::sqrt2 : 1.0);
  const double w_per_length = energy_per_length(mode, spec);
  if (!(w_per_length > 0.0) || !std::isfinite(w_per_length)) {
    throw NumericalError("normalize_per_photon: mode energy is not positive");
  }
  const double scale = std::sqrt(kHbar * g.omega / (length * w_per_length));
  FiberMode out = mode;
  out.A1 *= scale;
  out.B1 *= scale;
  out.F1 *= scale;
  out.G1 *= scale;
  out.normalized = true;
  return out;
}

double surface_field(const FiberMode& mode) { return mode.A1 * bessel_j(1, mode.u); }

double CoherenceLength::reported_um() const { return capped ? kCoherenceCapUm : raw_um; }

CoherenceLength coherence_length(const FiberMode& mode, const FiberSpec& spec, double kinetic_energy_keV) {
  const kin::ElectronParams e = kin::electron_from_voltage(kinetic_energy_keV);
  const double mismatch = std::abs(spec.k0_per_nm() / e.velocity_fraction - mode.beta_per_nm);
  const double raw = mismatch == 0.0 ? std::numeric_limits<double>::infinity() : kPi / mismatch * 1e-3;
  return {raw, !(raw <= kCoherenceCapUm)};
}

double decay_length(const FiberMode& mode, const FiberSpec& spec) {
  const double k1w = bessel_k_scaled(1, mode.w);
  auto ratio = [&](double rho) {
    return bessel_k_scaled(1, mode.w * rho) / k1w * std::exp(-mode.w * (rho - 1.0));
  };
  const double target = std::exp(-1.0);
  double lo = 1.0;
  double hi = 2.0;
  while (ratio(hi) > target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw NumericalError("decay_length: field does not decay");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (ratio(mid) > target ? lo : hi) = mid;
  }
  return spec.core_radius_nm * (0.5 * (lo + hi) - 1.0);
}

CouplingResult coupling_alpha_max(const FiberMode& normalized_mode, const FiberSpec& spec) {
  spec.validate();
  if (!normalized_mode.normalized) throw DomainError("coupling_alpha_max: mode is not normalised per photon");
  const Geometry g = geometry(spec);
  CouplingResult out;
  out.surface_field_per_photon = std::abs(surface_field(normalized_mode));
  out.alpha_max = kCharge * out.surface_field_per_photon * spec.length_um * 1e-6 / (2.0 * kHbar * g.omega);
  out.decay_length_nm = decay_length(normalized_mode, spec);
  if (normalized_mode.phase_velocity_fraction < 1.0) {
    out.phase_matched_voltage_kV =
        kin::electron_from_velocity(normalized_mode.phase_velocity_fraction).kinetic_energy;
  }
  out.coherence_200keV = coherence_length(normalized_mode, spec, 200.0);
  out.coherence_300keV = coherence_length(normalized_mode, spec, 300.0);
  return out;
}

std::vector<SweepRow> sweep_diameter(const FiberSpec& spec_template, const std::vector<double>& diameters_nm) {
  if (diameters_nm.empty()) throw DomainError("sweep_diameter: no diameters given");
  std::vector<SweepRow> rows(diameters_nm.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.diameter_nm = diameters_nm[i];
    try {
      FiberSpec spec = spec_template;
      spec.core_radius_nm = 0.5 * diameters_nm[i];
      const FiberMode mode = normalize_per_photon(solve_he11(spec), spec);
      row.coupling = coupling_alpha_max(mode, spec);
      row.mode = mode;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });
  return rows;
}

double phase_matching_diameter(const FiberSpec& spec_template, double kinetic_energy_keV, double lo_nm,
                               double hi_nm) {
  const double target = kin::electron_from_voltage(kinetic_energy_keV).velocity_fraction;
  auto mismatch = [&](double d) {
    FiberSpec spec = spec_template;
    spec.core_radius_nm = 0.5 * d;
    return solve_he11(spec).phase_velocity_fraction - target;
  };
  double flo = mismatch(lo_nm);
  const double fhi = mismatch(hi_nm);
  if ((flo < 0.0) == (fhi < 0.0)) {
    throw NumericalError("phase_matching_diameter: no phase-matched diameter inside the window");
  }
  double lo = lo_nm;
  double hi = hi_nm;
  for (int it = 0; it < 60 && hi - lo > 1e-9 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = mismatch(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

} // namespace qew::fiber
