#include "qew/oracle.hpp"

#include "qew/error.hpp"
#include "qew/interactions.hpp"
#include "qew/kernels.hpp"
#include "qew/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

namespace qew::oracle {

namespace {

constexpr int kTaylorDegree = 18;
constexpr int kEdgeDepth = 5;
constexpr double kWarnLevel = 1e-8;

// One j + n = c sector: the contiguous chain of electron indices j in
// [jlo, jhi] (photon number c - j).
struct Sector {
  int c;
  int jlo;
  int jhi;
  bool upper_truncated; // jhi < c: the chain continues past j_max
  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(jhi - jlo + 1); }
};

Sector sector_of(const TruncatedBasis& b, int c) {
  const int jlo = std::max(b.electron.lo, c - b.photon_max);
  const int jhi = std::min(b.electron.hi, c);
  return {c, jlo, jhi, jhi < c};
}

double one_norm(std::span<const cplx> m, std::size_t dim) {
  double best = 0.0;
  for (std::size_t col = 0; col < dim; ++col) {
    double s = 0.0;
    for (std::size_t row = 0; row < dim; ++row) s += std::abs(m[row * dim + col]);
    best = std::max(best, s);
  }
  return best;
}

} // namespace

void TruncatedBasis::validate() const {
  if (electron.lo > 0 || electron.hi < 0) throw DomainError("TruncatedBasis: electron window must contain 0");
  if (photon_max < 0) throw DomainError("TruncatedBasis: photon_max must be >= 0");
  if (second_electron && (second_electron->lo > 0 || second_electron->hi < 0)) {
    throw DomainError("TruncatedBasis: second electron window must contain 0");
  }
}

std::size_t TruncatedBasis::index(int j, int n) const {
  return static_cast<std::size_t>(j - electron.lo) * static_cast<std::size_t>(photon_max + 1) +
         static_cast<std::size_t>(n);
}

int TruncatedBasis::electron_of(std::size_t idx) const {
  return electron.lo + static_cast<int>(idx / static_cast<std::size_t>(photon_max + 1));
}

int TruncatedBasis::photon_of(std::size_t idx) const {
  return static_cast<int>(idx % static_cast<std::size_t>(photon_max + 1));
}

GeneratorMatrix::GeneratorMatrix(TruncatedBasis basis, cplx alpha, std::size_t state_cap)
    : basis_(std::move(basis)), alpha_(alpha) {
  basis_.validate();
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) throw DomainError("alpha must be finite");
  if (basis_.dimension() > state_cap) {
    throw DomainError("basis dimension " + std::to_string(basis_.dimension()) + " exceeds the cap of " +
                      std::to_string(state_cap) + " states");
  }
}

cplx GeneratorMatrix::entry(std::size_t row, std::size_t col) const {
  const int jc = basis_.electron_of(col);
  const int nc = basis_.photon_of(col);
  const int jr = basis_.electron_of(row);
  const int nr = basis_.photon_of(row);
  if (jr == jc - 1 && nr == nc + 1) return alpha_ * std::sqrt(nc + 1.0);
  if (jr == jc + 1 && nr == nc - 1) return -std::conj(alpha_) * std::sqrt(static_cast<double>(nc));
  return {};
}

std::vector<cplx> GeneratorMatrix::dense() const {
  const std::size_t dim = dimension();
  std::vector<cplx> m(dim * dim);
  for (std::size_t col = 0; col < dim; ++col) {
    const int j = basis_.electron_of(col);
    const int n = basis_.photon_of(col);
    if (basis_.contains(j - 1, n + 1)) m[basis_.index(j - 1, n + 1) * dim + col] = alpha_ * std::sqrt(n + 1.0);
    if (basis_.contains(j + 1, n - 1)) {
      m[basis_.index(j + 1, n - 1) * dim + col] = -std::conj(alpha_) * std::sqrt(static_cast<double>(n));
    }
  }
  return m;
}

GeneratorMatrix build_generator(const TruncatedBasis& basis, cplx alpha, std::size_t state_cap) {
  return {basis, alpha, state_cap};
}

std::vector<cplx> expm_dense(std::span<const cplx> m, std::size_t dim) {
  if (m.size() != dim * dim) throw DomainError("expm_dense: matrix size mismatch");
  std::vector<cplx> result(dim * dim);
  if (dim == 0) return result;
  const double norm = one_norm(m, dim);
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const double scale = std::ldexp(1.0, -squarings);
  std::vector<cplx> b(m.begin(), m.end());
  for (cplx& z : b) z *= scale;

  // Horner: R <- I + B R / k, k = degree .. 1.
  std::vector<cplx> tmp(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) result[i * dim + i] = 1.0;
  for (int k = kTaylorDegree; k >= 1; --k) {
    kernels::cgemm(dim, dim, dim, b, result, tmp);
    const double inv = 1.0 / k;
    for (std::size_t i = 0; i < dim * dim; ++i) result[i] = tmp[i] * inv;
    for (std::size_t i = 0; i < dim; ++i) result[i * dim + i] += 1.0;
  }
  for (int s = 0; s < squarings; ++s) {
    kernels::cgemm(dim, dim, dim, result, result, tmp);
    result.swap(tmp);
  }
  return result;
}

Evolution apply_smatrix(const GeneratorMatrix& gen, std::span<const cplx> initial) {
  const TruncatedBasis& basis = gen.basis();
  const std::size_t dim = basis.dimension();
  if (initial.size() != dim) throw DomainError("apply_smatrix: state length does not match the basis");

  std::vector<int> sectors;
  for (int c = basis.electron.lo; c <= basis.electron.hi + basis.photon_max; ++c) {
    const Sector sec = sector_of(basis, c);
    if (sec.jlo > sec.jhi) continue;
    for (int j = sec.jlo; j <= sec.jhi; ++j) {
      if (initial[basis.index(j, c - j)] != cplx{}) {
        sectors.push_back(c);
        break;
      }
    }
  }

  Evolution out{std::vector<cplx>(dim), {}};
  const cplx alpha = gen.alpha();
  std::mutex edge_mutex;
  parallel_for(sectors.size(), [&](std::size_t which) {
    const Sector sec = sector_of(basis, sectors[which]);
    const std::size_t m = sec.size();
    std::vector<cplx> block(m * m);
    for (std::size_t p = 0; p < m; ++p) {
      const int j = sec.jlo + static_cast<int>(p);
      const int n = sec.c - j;
      if (p > 0) block[(p - 1) * m + p] = alpha * std::sqrt(n + 1.0);
      if (p + 1 < m) block[(p + 1) * m + p] = -std::conj(alpha) * std::sqrt(static_cast<double>(n));
    }
    const std::vector<cplx> u = expm_dense(block, m);
    double edge = 0.0;
    for (std::size_t row = 0; row < m; ++row) {
      cplx acc{};
      for (std::size_t col = 0; col < m; ++col) {
        const int j = sec.jlo + static_cast<int>(col);
        acc += u[row * m + col] * initial[basis.index(j, sec.c - j)];
      }
      const int j = sec.jlo + static_cast<int>(row);
      out.state[basis.index(j, sec.c - j)] = acc;
      const bool near_lower = row < static_cast<std::size_t>(kEdgeDepth);
      const bool near_upper = sec.upper_truncated && row + kEdgeDepth >= m;
      if (near_lower || near_upper) edge += std::norm(acc);
    }
    std::lock_guard lock(edge_mutex);
    out.diagnostics.edge_population += edge;
  });

  const double before = std::sqrt(kernels::abs2_sum(initial));
  const double after = std::sqrt(kernels::abs2_sum(out.state));
  out.diagnostics.norm_change = std::abs(after - before);
  out.diagnostics.truncation_warning =
      out.diagnostics.norm_change > kWarnLevel || out.diagnostics.edge_population > kWarnLevel;
  return out;
}

int electron_margin(double alpha_mag) {
  return static_cast<int>(std::ceil(5.0 + alpha_mag * alpha_mag + 10.0 * alpha_mag));
}

namespace {

JointAmplitudeGrid grid_from_state(const TruncatedBasis& basis, std::span<const cplx> state) {
  return {AxisKind::electron_gain_index, basis.electron, AxisKind::photon_number, {0, basis.photon_max},
          std::vector<cplx>(state.begin(), state.end())};
}

} // namespace

OracleGrid eels_oracle(cplx alpha, const TruncatedBasis& basis) {
  const GeneratorMatrix gen = build_generator(basis, alpha);
  std::vector<cplx> initial(gen.dimension());
  initial[basis.index(0, 0)] = 1.0;
  Evolution ev = apply_smatrix(gen, initial);
  return {grid_from_state(basis, ev.state), ev.diagnostics};
}

OracleGrid pinem_oracle(cplx alpha, cplx beta, const TruncatedBasis& basis) {
  const GeneratorMatrix gen = build_generator(basis, alpha);
  std::vector<cplx> initial(gen.dimension());
  for (int n = 0; n <= basis.photon_max; ++n) initial[basis.index(0, n)] = eels_amplitude(beta, n);
  Evolution ev = apply_smatrix(gen, initial);
  return {grid_from_state(basis, ev.state), ev.diagnostics};
}

OracleGrid two_electron_oracle(cplx alpha1, cplx alpha2, const TruncatedBasis& basis) {
  basis.validate();
  if (!basis.second_electron) throw DomainError("two_electron_oracle: basis needs a second electron window");
  const GeneratorMatrix first = build_generator(basis, alpha1);
  std::vector<cplx> initial(first.dimension());
  initial[basis.index(0, 0)] = 1.0;
  const Evolution after_first = apply_smatrix(first, initial);

  const TruncatedBasis second_basis{*basis.second_electron, basis.photon_max, std::nullopt};
  const GeneratorMatrix second = build_generator(second_basis, alpha2);
  const Interval s_range{0, std::min(-basis.electron.lo, basis.photon_max)};
  const Interval k_range = *basis.second_electron;
  std::vector<cplx> cells(s_range.size() * k_range.size());
  Diagnostics diag = after_first.diagnostics;
  std::vector<cplx> start(second.dimension());
  for (int s = s_range.lo; s <= s_range.hi; ++s) {
    const cplx a_s = after_first.state[basis.index(-s, s)];
    if (a_s == cplx{}) continue;
    std::fill(start.begin(), start.end(), cplx{});
    start[second_basis.index(0, s)] = a_s;
    const Evolution ev = apply_smatrix(second, start);
    diag.edge_population += ev.diagnostics.edge_population;
    diag.norm_change = std::max(diag.norm_change, ev.diagnostics.norm_change);
    for (int k = k_range.lo; k <= k_range.hi; ++k) {
      const int n = s - k;
      if (n < 0 || n > basis.photon_max) continue;
      cells[static_cast<std::size_t>(s) * k_range.size() + static_cast<std::size_t>(k - k_range.lo)] =
          ev.state[second_basis.index(k, n)];
    }
  }
  diag.truncation_warning = diag.norm_change > kWarnLevel || diag.edge_population > kWarnLevel;
  return {{AxisKind::electron1_loss_index, s_range, AxisKind::electron_gain_index, k_range, std::move(cells)}, diag};
}

TruncatedBasis default_eels_basis(cplx alpha) {
  const int margin = electron_margin(std::abs(alpha));
  return {{-margin, margin}, margin, std::nullopt};
}

TruncatedBasis default_pinem_basis(cplx alpha, cplx beta) {
  const Interval n0 = suggest_range(std::norm(beta));
  const int reach = std::max(sideband_reach(std::abs(alpha), n0.hi), electron_margin(std::abs(alpha)));
  return {{-reach - kEdgeDepth, reach + kEdgeDepth}, n0.hi + reach + kEdgeDepth, std::nullopt};
}

TruncatedBasis default_two_electron_basis(cplx alpha1, cplx alpha2) {
  const Interval s = suggest_range(std::norm(alpha1));
  const int reach = std::max(sideband_reach(std::abs(alpha2), s.hi), electron_margin(std::abs(alpha2)));
  const int s_hi = s.hi + kEdgeDepth;
  return {{-s_hi, 0}, s_hi + reach + kEdgeDepth, Interval{-reach - kEdgeDepth, reach + kEdgeDepth}};
}

} // namespace qew::oracle
