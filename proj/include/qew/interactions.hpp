#pragma once

#include "qew/core_state.hpp"

namespace qew {

// Sign conventions: k > 0 is electron energy gain, k < 0 loss. For PINEM, n
// is the final photon number, so the initial Fock component is n + k. For two
// electrons, s is the number of quanta the first electron lost (the photon
// number seen by the second electron).

struct AmplitudeValue {
  cplx value;
  bool underflow; // magnitude below the double range; value is exactly 0
};

// e^{-|alpha|^2/2} alpha^k / sqrt(k!), k = quanta lost. Throws DomainError for k < 0.
cplx eels_amplitude(cplx alpha, int k);

// Exact PINEM coefficient c_{n,k}. Gain uses the prefactor (-alpha*)^k, loss
// alpha^{|k|}; both reduce to alpha^{|k|} when alpha = -alpha*.
// Zero when n + k < 0.
cplx pinem_coefficient(cplx alpha, cplx beta, int n, int k);
AmplitudeValue pinem_coefficient_checked(cplx alpha, cplx beta, int n, int k);

struct PinemClassicalParams {
  cplx g;
};

// g = alpha |beta|.
cplx g_from_alpha_beta(cplx alpha, cplx beta);
// alpha = g / |beta|; throws DomainError when beta == 0.
cplx alpha_from_g(cplx g, cplx beta);

// e^{ik arg(beta g)} J_k(2|g|), with J_{-k} = (-1)^k J_k. Matches the exact
// coefficients' phases only for alpha = -alpha*.
cplx pinem_classical_amplitude(cplx g, int k, cplx beta = 1.0);

// Exact two-electron coefficient c_{s,k}; zero for k > s.
cplx two_electron_coefficient(cplx alpha1, cplx alpha2, int s, int k);
AmplitudeValue two_electron_coefficient_checked(cplx alpha1, cplx alpha2, int s, int k);

// Factorised approximation for |alpha1| >> 1 >> |alpha2|:
// [e^{-|alpha1|^2/2} alpha1^s / sqrt(s!)] * e^{i|k|phi} J_{|k|}(2|alpha2| sqrt(s)),
// phi = arg(-alpha2*) for gain and arg(alpha2) for loss.
cplx two_electron_strong_field_limit(cplx alpha1, cplx alpha2, int s, int k);

// Grid builders. Axes: EELS (k in [-k_max, 0], n in [0, k_max]);
// PINEM (k, n); two-electron (s, k).
JointAmplitudeGrid eels_grid(cplx alpha, int k_max, Metadata meta = {});
JointAmplitudeGrid pinem_grid(cplx alpha, cplx beta, Interval k_range, Interval n_range, Metadata meta = {});
JointAmplitudeGrid two_electron_grid(cplx alpha1, cplx alpha2, Interval s_range, Interval k_range,
                                     Metadata meta = {});

struct PinemRanges {
  Interval k;
  Interval n;
};
// Covers the coherent-state support of beta plus the sideband spread.
PinemRanges suggest_pinem_ranges(cplx alpha, cplx beta);

struct TwoElectronRanges {
  Interval s;
  Interval k;
};
TwoElectronRanges suggest_two_electron_ranges(cplx alpha1, cplx alpha2);

// Sideband half-width for coupling |alpha| acting on photon numbers up to n_hi.
int sideband_reach(double alpha_mag, int n_hi);

// |J_k(2|g|)|^2 over k_range.
Marginal classical_marginal(cplx g, Interval k_range);

} // namespace qew
