#include "qew/interactions.hpp"

#include "qew/error.hpp"
#include "qew/special_fn.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qew {

namespace {

using special::log_factorial;

// Magnitude and phase accumulated separately, combined at the end.
struct LogAmp {
  double log_mag = 0.0;
  double phase = 0.0;
  bool zero = false;

  // Multiplies by z^power.
  void times_power(cplx z, int power) {
    if (power == 0) return;
    if (z == cplx{}) {
      zero = true;
      return;
    }
    log_mag += power * std::log(std::abs(z));
    phase += power * std::arg(z);
  }

  void times_kernel(int big_n, int k, double x) {
    const special::LogSeriesResult s = special::kernel_sum_log(big_n, k, x);
    if (s.sign == 0) {
      zero = true;
      return;
    }
    log_mag += s.log_abs;
    if (s.sign < 0) phase += std::numbers::pi;
  }

  [[nodiscard]] AmplitudeValue finish() const {
    if (zero) return {{}, false};
    const double mag = std::exp(log_mag);
    if (mag == 0.0) return {{}, true};
    return {std::polar(mag, phase), false};
  }
};

void require_finite(cplx z, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError(std::string(what) + " must be finite");
  }
}

} // namespace

cplx eels_amplitude(cplx alpha, int k) {
  require_finite(alpha, "alpha");
  if (k < 0) throw DomainError("eels_amplitude: k counts quanta lost and must be >= 0");
  LogAmp a;
  a.log_mag = -0.5 * std::norm(alpha) - 0.5 * log_factorial(k);
  a.times_power(alpha, k);
  return a.finish().value;
}

AmplitudeValue pinem_coefficient_checked(cplx alpha, cplx beta, int n, int k) {
  require_finite(alpha, "alpha");
  require_finite(beta, "beta");
  if (n < 0) throw DomainError("pinem_coefficient: n must be >= 0");
  if (n + k < 0) return {{}, false};
  const int q = std::abs(k);
  LogAmp a;
  a.log_mag = 0.5 * (std::norm(alpha) - std::norm(beta)) - log_factorial(n + k) - 0.5 * log_factorial(n);
  a.times_power(k >= 0 ? -std::conj(alpha) : alpha, q);
  a.times_power(beta, n + k);
  if (!a.zero) a.times_kernel(k >= 0 ? n + k : n, q, std::norm(alpha));
  return a.finish();
}

cplx pinem_coefficient(cplx alpha, cplx beta, int n, int k) { return pinem_coefficient_checked(alpha, beta, n, k).value; }

cplx g_from_alpha_beta(cplx alpha, cplx beta) { return alpha * std::abs(beta); }

cplx alpha_from_g(cplx g, cplx beta) {
  const double b = std::abs(beta);
  if (b == 0.0) throw DomainError("alpha_from_g: beta must be nonzero");
  return g / b;
}

cplx pinem_classical_amplitude(cplx g, int k, cplx beta) {
  const double mag = std::abs(g);
  if (mag == 0.0) return k == 0 ? 1.0 : 0.0;
  const int q = std::abs(k);
  double j = special::bessel_j(q, 2.0 * mag);
  if (k < 0 && q % 2 == 1) j = -j;
  const double theta = beta == cplx{} ? std::arg(g) : std::arg(beta * g);
  return std::polar(1.0, k * theta) * j;
}

AmplitudeValue two_electron_coefficient_checked(cplx alpha1, cplx alpha2, int s, int k) {
  require_finite(alpha1, "alpha1");
  require_finite(alpha2, "alpha2");
  if (s < 0) throw DomainError("two_electron_coefficient: s must be >= 0");
  if (k > s) return {{}, false};
  const int q = std::abs(k);
  LogAmp a;
  a.log_mag = -0.5 * std::norm(alpha1) + 0.5 * std::norm(alpha2) - log_factorial(s) - 0.5 * log_factorial(s - k);
  a.times_power(alpha1, s);
  a.times_power(k >= 0 ? -std::conj(alpha2) : alpha2, q);
  if (!a.zero) a.times_kernel(k >= 0 ? s : s + q, q, std::norm(alpha2));
  return a.finish();
}

cplx two_electron_coefficient(cplx alpha1, cplx alpha2, int s, int k) {
  return two_electron_coefficient_checked(alpha1, alpha2, s, k).value;
}

cplx two_electron_strong_field_limit(cplx alpha1, cplx alpha2, int s, int k) {
  if (s < 0) throw DomainError("two_electron_strong_field_limit: s must be >= 0");
  const cplx poisson = eels_amplitude(alpha1, s);
  const double a2 = std::abs(alpha2);
  if (a2 == 0.0) return k == 0 ? poisson : cplx{};
  const int q = std::abs(k);
  const double phi = k >= 0 ? std::arg(-std::conj(alpha2)) : std::arg(alpha2);
  return poisson * std::polar(special::bessel_j(q, 2.0 * a2 * std::sqrt(static_cast<double>(s))), q * phi);
}

int sideband_reach(double alpha_mag, int n_hi) {
  const double mu = 2.0 * alpha_mag * std::sqrt(static_cast<double>(std::max(n_hi, 0))) + alpha_mag * alpha_mag;
  return static_cast<int>(std::ceil(mu + 10.0 * std::sqrt(mu) + 10.0));
}

PinemRanges suggest_pinem_ranges(cplx alpha, cplx beta) {
  const Interval n0 = suggest_range(std::norm(beta));
  const int reach = sideband_reach(std::abs(alpha), n0.hi);
  return {{-reach, reach}, {std::max(0, n0.lo - reach), n0.hi + reach}};
}

TwoElectronRanges suggest_two_electron_ranges(cplx alpha1, cplx alpha2) {
  const Interval s = suggest_range(std::norm(alpha1));
  const int reach = sideband_reach(std::abs(alpha2), s.hi);
  return {s, {-reach, std::min(reach, s.hi)}};
}

JointAmplitudeGrid eels_grid(cplx alpha, int k_max, Metadata meta) {
  if (k_max < 0) throw DomainError("eels_grid: k_max must be >= 0");
  return JointAmplitudeGrid::tabulate(
      AxisKind::electron_gain_index, {-k_max, 0}, AxisKind::photon_number, {0, k_max},
      [&](int k, int n) { return n == -k ? eels_amplitude(alpha, n) : cplx{}; }, std::move(meta));
}

JointAmplitudeGrid pinem_grid(cplx alpha, cplx beta, Interval k_range, Interval n_range, Metadata meta) {
  if (n_range.lo < 0) throw DomainError("pinem_grid: photon numbers must be >= 0");
  return JointAmplitudeGrid::tabulate(
      AxisKind::electron_gain_index, k_range, AxisKind::photon_number, n_range,
      [&](int k, int n) { return pinem_coefficient(alpha, beta, n, k); }, std::move(meta));
}

JointAmplitudeGrid two_electron_grid(cplx alpha1, cplx alpha2, Interval s_range, Interval k_range, Metadata meta) {
  if (s_range.lo < 0) throw DomainError("two_electron_grid: s must be >= 0");
  return JointAmplitudeGrid::tabulate(
      AxisKind::electron1_loss_index, s_range, AxisKind::electron_gain_index, k_range,
      [&](int s, int k) { return two_electron_coefficient(alpha1, alpha2, s, k); }, std::move(meta));
}

Marginal classical_marginal(cplx g, Interval k_range) {
  Marginal m{AxisKind::electron_gain_index, k_range, std::vector<double>(k_range.size())};
  for (int k = k_range.lo; k <= k_range.hi; ++k) {
    m.values[static_cast<std::size_t>(k - k_range.lo)] = std::norm(pinem_classical_amplitude(g, k));
  }
  return m;
}

} // namespace qew
