#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qew {

using cplx = std::complex<double>;

// Closed integer interval [lo, hi].
struct Interval {
  int lo = 0;
  int hi = 0;

  [[nodiscard]] std::size_t size() const { return hi < lo ? 0 : static_cast<std::size_t>(hi - lo + 1); }
  [[nodiscard]] bool contains(int v) const { return v >= lo && v <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Index conventions: k counts electron energy gain in quanta (negative is
// loss); s counts quanta lost by the first electron of a two-electron run
// (some texts write n for it); n is the photon number.
enum class AxisKind { electron_gain_index, electron1_loss_index, photon_number };

std::string_view axis_kind_name(AxisKind kind);
AxisKind parse_axis_kind(std::string_view name);

// Interaction strengths of a run. Stored as given; the physical convention
// alpha = -conj(alpha) (purely imaginary) is reported, not enforced.
struct CouplingParams {
  cplx alpha{};
  cplx alpha1{};
  cplx alpha2{};
  cplx beta{};

  // Throws DomainError on non-finite components.
  void validate() const;
  // Classical PINEM coupling g = alpha |beta|.
  [[nodiscard]] cplx g() const { return alpha * std::abs(beta); }
};

// |Re alpha| <= tol, i.e. alpha = -conj(alpha) within tol.
bool satisfies_imaginary_convention(cplx alpha, double tol = 1e-12);

// Ordered key=value record of generation parameters.
using Metadata = std::vector<std::pair<std::string, std::string>>;

std::string metadata_value(const Metadata& meta, std::string_view key, std::string_view fallback = {});

// Dense complex amplitude table over two integer axes. Row-major: axis1 is
// the slow index. Immutable after construction.
class JointAmplitudeGrid {
public:
  JointAmplitudeGrid(AxisKind axis1_kind, Interval axis1, AxisKind axis2_kind, Interval axis2,
                     std::vector<cplx> amplitudes, Metadata metadata = {});

  // Fills every cell from fn(axis1_value, axis2_value); rows are evaluated in
  // parallel under the QEW_THREADS budget.
  static JointAmplitudeGrid tabulate(AxisKind axis1_kind, Interval axis1, AxisKind axis2_kind,
                                     Interval axis2, const std::function<cplx(int, int)>& fn,
                                     Metadata metadata = {});

  [[nodiscard]] AxisKind axis1_kind() const { return axis1_kind_; }
  [[nodiscard]] AxisKind axis2_kind() const { return axis2_kind_; }
  [[nodiscard]] Interval axis1_range() const { return axis1_; }
  [[nodiscard]] Interval axis2_range() const { return axis2_; }
  [[nodiscard]] std::span<const cplx> amplitudes() const { return amplitudes_; }
  [[nodiscard]] const Metadata& metadata() const { return metadata_; }

  // Amplitude at axis values (not offsets); zero outside the declared ranges.
  [[nodiscard]] cplx at(int v1, int v2) const;
  [[nodiscard]] double probability(int v1, int v2) const { return std::norm(at(v1, v2)); }

  [[nodiscard]] JointAmplitudeGrid with_metadata(Metadata extra) const;

private:
  AxisKind axis1_kind_;
  Interval axis1_;
  AxisKind axis2_kind_;
  Interval axis2_;
  std::vector<cplx> amplitudes_;
  Metadata metadata_;
};

struct Marginal {
  AxisKind axis_kind;
  Interval range;
  std::vector<double> values;

  [[nodiscard]] double at(int v) const;
  [[nodiscard]] double sum() const;
};

// Sum of |c|^2 over the other axis. The axis is selected by kind.
Marginal marginalize(const JointAmplitudeGrid& grid, AxisKind axis);

double total_probability(const JointAmplitudeGrid& grid);

// Truncation window for a Poisson-like count with the given mean:
// [max(0, floor(mean - 10 sqrt(mean))), ceil(mean + 10 sqrt(mean) + 10)].
Interval suggest_range(double mean);

} // namespace qew
