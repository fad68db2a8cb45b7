// One PASS/FAIL line per acceptance criterion; exit status 1 if any fail.

#include "qew/cli.hpp"
#include "qew/fiber_mode.hpp"
#include "qew/grid_io.hpp"
#include "qew/interactions.hpp"
#include "qew/kinematics.hpp"
#include "qew/oracle.hpp"
#include "qew/special_fn.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <tuple>

using namespace qew;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double max_grid_diff(const JointAmplitudeGrid& g, const std::function<cplx(int, int)>& exact, double floor) {
  double worst = 0.0;
  for (int a = g.axis1_range().lo; a <= g.axis1_range().hi; ++a) {
    for (int b = g.axis2_range().lo; b <= g.axis2_range().hi; ++b) {
      const cplx e = exact(a, b);
      if (std::abs(e) <= floor && std::abs(g.at(a, b)) <= floor) continue;
      worst = std::max(worst, std::abs(g.at(a, b) - e));
    }
  }
  return worst;
}

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double mag : {0.3, 0.8, 1.5}) {
    const cplx alpha(0, -mag);
    const oracle::OracleGrid o = oracle::eels_oracle(alpha, oracle::default_eels_basis(alpha));
    worst = std::max(worst, max_grid_diff(o.grid, [&](int k, int n) {
      return k == -n ? eels_amplitude(alpha, n) : cplx{};
    }, -1.0));
  }
  const double t = seconds_since(t0);
  report(1, worst < 1e-8 && t < 5.0, fmt("EELS oracle max error %.3g, %.2f s", worst, t));
}

void criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (auto [am, bm] : {std::pair{0.1, 2.0}, std::pair{0.5, 3.0}, std::pair{1.0, 2.0}}) {
    const cplx alpha(0, -am);
    const cplx beta = bm;
    const oracle::OracleGrid o = oracle::pinem_oracle(alpha, beta, oracle::default_pinem_basis(alpha, beta));
    worst = std::max(worst, max_grid_diff(o.grid, [&](int k, int n) {
      return pinem_coefficient(alpha, beta, n, k);
    }, 1e-12));
  }
  const double t = seconds_since(t0);
  report(2, worst < 1e-8 && t < 60.0, fmt("PINEM oracle max error %.3g on |c| > 1e-12, %.2f s", worst, t));
}

void criterion3() {
  const cplx a(0, -1);
  const oracle::OracleGrid o = oracle::two_electron_oracle(a, a, oracle::default_two_electron_basis(a, a));
  const double worst = max_grid_diff(o.grid, [&](int s, int k) { return two_electron_coefficient(a, a, s, k); }, -1.0);
  report(3, worst < 1e-8, fmt("two-electron oracle max error %.3g", worst));
}

void criterion4() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> mag1(0.0, 1.0), mag4(0.0, 4.0), mag15(0.0, 1.5), mag3(0.0, 3.0);
  double worst = 0.0;
  int draws = 0;
  for (int i = 0; i < 20; ++i) {
    const cplx a = std::polar(mag3(rng), phase(rng));
    worst = std::max(worst, std::abs(total_probability(eels_grid(a, suggest_range(std::norm(a)).hi)) - 1.0));
    const cplx alpha = std::polar(mag1(rng), phase(rng));
    const cplx beta = std::polar(mag4(rng), phase(rng));
    const PinemRanges pr = suggest_pinem_ranges(alpha, beta);
    worst = std::max(worst, std::abs(total_probability(pinem_grid(alpha, beta, pr.k, pr.n)) - 1.0));
    const cplx a1 = std::polar(mag15(rng), phase(rng));
    const cplx a2 = std::polar(mag15(rng), phase(rng));
    const TwoElectronRanges tr = suggest_two_electron_ranges(a1, a2);
    worst = std::max(worst, std::abs(total_probability(two_electron_grid(a1, a2, tr.s, tr.k)) - 1.0));
    draws += 3;
  }
  report(4, worst < 1e-9, fmt("max |total - 1| = %.3g over %.0f grids", worst, draws));
}

double bessel_marginal_error(double am, double bm) {
  const cplx alpha(0, -am);
  const cplx beta = bm;
  const PinemRanges r = suggest_pinem_ranges(alpha, beta);
  const Marginal m = marginalize(pinem_grid(alpha, beta, r.k, r.n), AxisKind::electron_gain_index);
  double worst = 0.0;
  for (int k = r.k.lo; k <= r.k.hi; ++k) {
    const double j = special::bessel_j(std::abs(k), 2 * am * bm);
    worst = std::max(worst, std::abs(m.at(k) - j * j));
  }
  return worst;
}

void criterion5() {
  const double e1 = bessel_marginal_error(0.01, 10.0);
  const double e2 = bessel_marginal_error(0.02, 50.0);
  report(5, e1 < 1e-3 && e2 < 1e-3, fmt("Bessel marginal error %.3g (|g|=0.1), %.3g (|g|=1)", e1, e2));
}

void criterion6() {
  const cplx a1(0, -1.0);
  const cplx a2(0, -0.5);
  double worst = 0.0;
  for (int s = 0; s <= 12; ++s) {
    for (int k = -12; k <= 12; ++k) {
      const cplx two = two_electron_coefficient(a1, a2, s, k);
      const cplx pinem = s - k >= 0 ? pinem_coefficient(a2, a1, s - k, k) : cplx{};
      worst = std::max(worst, std::abs(two - pinem));
    }
  }
  report(6, worst < 1e-10, fmt("shear identity max deviation %.3g", worst));
}

void criterion7() {
  // Off-support cells must be exactly zero; on-support cells agree to rounding.
  bool zeros = true;
  double worst = 0.0;
  for (double mag : {0.3, 1.0, 2.0}) {
    const cplx a2(0, -mag);
    for (int s = 0; s <= 10; ++s) {
      for (int k = -30; k <= 10; ++k) {
        const cplx c = two_electron_coefficient(0.0, a2, s, k);
        if (s == 0 && k <= 0) {
          const cplx expect = eels_amplitude(a2, -k);
          worst = std::max(worst, std::abs(c - expect) / std::abs(expect));
        } else {
          zeros &= c == cplx{};
        }
      }
    }
  }
  report(7, zeros && worst < 1e-14,
         fmt("alpha1 = 0: off-support cells exactly zero (%.0f), max relative deviation %.2g", zeros, worst));
}

void criterion8() {
  const kin::ElectronParams e = kin::electron_from_voltage(200.0);
  const double z = kin::dispersion_distance(e, 5 * 1.165);
  const kin::Deflection d = kin::deflection(e, 1.0, 1.1, 100.0);
  const bool ok = e.gamma >= 1.38 && e.gamma <= 1.40 && e.velocity_fraction >= 0.69 &&
                  e.velocity_fraction <= 0.70 && std::abs(z / 5.3 - 1) < 0.05 &&
                  std::abs(d.theta_f / 6.5e-6 - 1) < 0.1 && d.displacement_nm > 0.1 && d.displacement_nm < 0.4;
  char buf[200];
  std::snprintf(buf, sizeof buf, "gamma %.4f, v/c %.4f, z %.3f mm, theta/alpha %.3g, x(L) %.3f nm", e.gamma,
                e.velocity_fraction, z, d.theta_f, d.displacement_nm);
  report(8, ok, buf);
}

void criterion9() {
  using namespace fiber;
  const double pi = std::numbers::pi;
  FiberSpec spec;
  spec.core_radius_nm = 231.5;
  const FiberMode raw = solve_he11(spec);
  const FiberMode m = normalize_per_photon(raw, spec);
  const double a = spec.core_radius_nm;
  double continuity = 0.0;
  for (auto [c, phi, t] : {std::tuple{Component::Ez, 1.0, 0.0}, std::tuple{Component::Hz, 0.3, 0.0},
                           std::tuple{Component::Ephi, 0.3, pi / 2}, std::tuple{Component::Hphi, 1.0, pi / 2}}) {
    const double in = field_at(m, spec, a * (1 - 1e-13), phi, c, t);
    const double out = field_at(m, spec, a * (1 + 1e-13), phi, c, t);
    continuity = std::max(continuity, std::abs(in - out) / std::abs(in));
  }
  const double omega = 2 * pi * 299792458.0 / (spec.vacuum_wavelength_nm * 1e-9);
  const double photon = 1.054571817e-34 * omega;
  const double energy = std::abs(energy_per_length(m, spec) * spec.length_um * 1e-6 / photon - 1);
  FiberSpec longer = spec;
  longer.length_um *= 4;
  const double scaling = std::abs(coupling_alpha_max(normalize_per_photon(raw, longer), longer).alpha_max /
                                      coupling_alpha_max(m, spec).alpha_max -
                                  2.0);
  const double d_sin = phase_matching_diameter(spec, 200.0);
  FiberSpec si = spec;
  si.core_index = 3.5;
  const double d_si = phase_matching_diameter(si, 200.0);
  si.core_radius_nm = d_si / 2;
  const CouplingResult cs = coupling_alpha_max(normalize_per_photon(solve_he11(si), si), si);
  FiberSpec matched = spec;
  matched.core_radius_nm = d_sin / 2;
  const CouplingResult cm = coupling_alpha_max(normalize_per_photon(solve_he11(matched), matched), matched);
  const bool ok = raw.residual < 1e-12 && continuity < 1e-10 && energy < 1e-8 && scaling < 2e-12 &&
                  std::abs(d_sin / 463 - 1) < 0.1 && std::abs(d_si / 213 - 1) < 0.1 && cs.coherence_200keV.capped &&
                  cm.coherence_200keV.capped;
  char buf[300];
  std::snprintf(buf, sizeof buf,
                "residual %.2g, continuity %.2g, energy %.2g, sqrt(L) scaling %.2g, matched %.1f nm (n=2) %.1f nm "
                "(n=3.5), L_c capped %d/%d",
                raw.residual, continuity, energy, scaling, d_sin, d_si, cm.coherence_200keV.capped,
                cs.coherence_200keV.capped);
  report(9, ok, buf);
}


void criterion10() {
  const auto dir = std::filesystem::temp_directory_path() / "qew_acceptance";
  std::filesystem::create_directories(dir);
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  double worst_unitarity = 0.0;
  double worst_bessel = 0.0;
  int grids = 0;
  for (const std::string name : {"pinem-beta10", "two-electron"}) {
    cli::RunConfig c = cli::preset(name);
    c.output_path = (dir / (name + ".csv")).string();
    std::ostringstream out, err;
    const cli::RunOutcome r = cli::run(c, out, err);
    if (r.exit_code != 0) {
      ok = false;
      continue;
    }
    for (const std::string& path : r.files) {
      std::ifstream f(path);
      const JointAmplitudeGrid g = read_grid_csv(f);
      ++grids;
      worst_unitarity = std::max(worst_unitarity, std::abs(total_probability(g) - 1.0));
      if (name != "pinem-beta10") continue;
      const double am = std::stod(metadata_value(g.metadata(), "alpha-mag"));
      const double bm = std::stod(metadata_value(g.metadata(), "beta-mag"));
      // Criterion 5 applies to the weak-coupling members, |alpha| <= 0.02.
      if (am > 0.02) continue;
      const Marginal m = marginalize(g, AxisKind::electron_gain_index);
      for (int k = m.range.lo; k <= m.range.hi; ++k) {
        const double j = special::bessel_j(std::abs(k), 2 * am * bm);
        worst_bessel = std::max(worst_bessel, std::abs(m.at(k) - j * j));
      }
    }
  }
  std::filesystem::remove_all(dir);
  const double t = seconds_since(t0);
  ok = ok && t < 300.0 && worst_unitarity < 1e-9 && worst_bessel < 1e-3;
  char buf[200];
  std::snprintf(buf, sizeof buf, "presets: %d grids in %.1f s, max |total - 1| %.3g, weak-member Bessel error %.3g",
                grids, t, worst_unitarity, worst_bessel);
  report(10, ok, buf);
}

} // namespace

int main() {
  const std::function<void()> all[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                       criterion6, criterion7, criterion8, criterion9, criterion10};
  int id = 1;
  for (const auto& c : all) {
    try {
      c();
    } catch (const std::exception& e) {
      report(id, false, std::string("threw: ") + e.what());
    }
    ++id;
  }
  return failures == 0 ? 0 : 1;
}
