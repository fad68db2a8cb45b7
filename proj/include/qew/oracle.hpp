#pragma once

#include "qew/core_state.hpp"

#include <optional>
#include <span>
#include <vector>

namespace qew::oracle {

// Joint states |E_j, n> with j in `electron`, 0 <= n <= photon_max.
// Flat index (j - j_min) * (photon_max + 1) + n.
struct TruncatedBasis {
  Interval electron;
  int photon_max = 0;
  // Window for the second electron of a two-electron run.
  std::optional<Interval> second_electron;

  void validate() const; // throws DomainError
  [[nodiscard]] std::size_t dimension() const { return electron.size() * static_cast<std::size_t>(photon_max + 1); }
  [[nodiscard]] std::size_t index(int j, int n) const;
  [[nodiscard]] bool contains(int j, int n) const { return electron.contains(j) && n >= 0 && n <= photon_max; }
  [[nodiscard]] int electron_of(std::size_t idx) const;
  [[nodiscard]] int photon_of(std::size_t idx) const;
};

inline constexpr std::size_t kDefaultStateCap = 40000;

// G = alpha b a^dag - alpha* b^dag a restricted to the basis. Only the two
// bands are stored; transitions that leave the window are dropped.
class GeneratorMatrix {
public:
  GeneratorMatrix(TruncatedBasis basis, cplx alpha, std::size_t state_cap = kDefaultStateCap);

  [[nodiscard]] const TruncatedBasis& basis() const { return basis_; }
  [[nodiscard]] cplx alpha() const { return alpha_; }
  [[nodiscard]] std::size_t dimension() const { return basis_.dimension(); }
  // <row|G|col>.
  [[nodiscard]] cplx entry(std::size_t row, std::size_t col) const;
  // Row-major dense copy.
  [[nodiscard]] std::vector<cplx> dense() const;

private:
  TruncatedBasis basis_;
  cplx alpha_;
};

// Throws DomainError when the dimension exceeds state_cap.
GeneratorMatrix build_generator(const TruncatedBasis& basis, cplx alpha, std::size_t state_cap = kDefaultStateCap);

struct Diagnostics {
  double norm_change = 0.0;     // | |out| - |in| |
  double edge_population = 0.0; // probability within 5 states of a truncated window edge
  bool truncation_warning = false; // either of the above above 1e-8
};

struct Evolution {
  std::vector<cplx> state;
  Diagnostics diagnostics;
};

// exp(G) applied to `initial` (length = basis dimension). G conserves j + n,
// so each sector is exponentiated on its own, densely, by scaling and
// squaring around a Taylor core; sectors with no initial weight are skipped.
Evolution apply_smatrix(const GeneratorMatrix& gen, std::span<const cplx> initial);

// Dense exp(M) for a row-major square matrix; exposed for testing.
std::vector<cplx> expm_dense(std::span<const cplx> m, std::size_t dim);

struct OracleGrid {
  JointAmplitudeGrid grid;
  Diagnostics diagnostics;
};

// Symmetric electron window margin ceil(5 + |alpha|^2 + 10 |alpha|).
int electron_margin(double alpha_mag);

// Starting from |E_0, 0>; grid over (electron_gain_index, photon_number).
OracleGrid eels_oracle(cplx alpha, const TruncatedBasis& basis);
// Starting from |E_0> (x) coherent(beta) cut at photon_max (not renormalised).
OracleGrid pinem_oracle(cplx alpha, cplx beta, const TruncatedBasis& basis);
// First electron with alpha1 on `electron` x photons, then the second with
// alpha2 on `second_electron` x photons, one run per photon number s.
// Grid over (electron1_loss_index s in [0, -electron.lo], electron_gain_index k).
OracleGrid two_electron_oracle(cplx alpha1, cplx alpha2, const TruncatedBasis& basis);

TruncatedBasis default_eels_basis(cplx alpha);
TruncatedBasis default_pinem_basis(cplx alpha, cplx beta);
TruncatedBasis default_two_electron_basis(cplx alpha1, cplx alpha2);

} // namespace qew::oracle
