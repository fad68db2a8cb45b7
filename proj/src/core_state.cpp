#include "qew/core_state.hpp"

#include "qew/error.hpp"
#include "qew/kernels.hpp"
#include "qew/parallel.hpp"

#include <cmath>
#include <numeric>

namespace qew {

namespace {

constexpr double kProbabilitySlack = 1e-9;

}

std::string_view axis_kind_name(AxisKind kind) {
  switch (kind) {
  case AxisKind::electron_gain_index: return "electron_gain_index";
  case AxisKind::electron1_loss_index: return "electron1_loss_index";
  case AxisKind::photon_number: return "photon_number";
  }
  return "unknown";
}

AxisKind parse_axis_kind(std::string_view name) {
  if (name == "electron_gain_index") return AxisKind::electron_gain_index;
  if (name == "electron1_loss_index") return AxisKind::electron1_loss_index;
  if (name == "photon_number") return AxisKind::photon_number;
  throw DomainError("unknown axis kind '" + std::string(name) + "'");
}

void CouplingParams::validate() const {
  for (const cplx& v : {alpha, alpha1, alpha2, beta}) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw DomainError("coupling parameters must be finite");
    }
  }
}

bool satisfies_imaginary_convention(cplx alpha, double tol) { return std::abs(alpha.real()) <= tol; }

std::string metadata_value(const Metadata& meta, std::string_view key, std::string_view fallback) {
  for (const auto& [k, v] : meta) {
    if (k == key) return v;
  }
  return std::string(fallback);
}

JointAmplitudeGrid::JointAmplitudeGrid(AxisKind axis1_kind, Interval axis1, AxisKind axis2_kind,
                                       Interval axis2, std::vector<cplx> amplitudes, Metadata metadata)
    : axis1_kind_(axis1_kind), axis1_(axis1), axis2_kind_(axis2_kind), axis2_(axis2),
      amplitudes_(std::move(amplitudes)), metadata_(std::move(metadata)) {
  if (axis1_.hi < axis1_.lo || axis2_.hi < axis2_.lo) {
    throw DomainError("grid axis range is empty (hi < lo)");
  }
  if (amplitudes_.size() != axis1_.size() * axis2_.size()) {
    throw DomainError("grid amplitude count does not match the declared ranges");
  }
  for (const cplx& c : amplitudes_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw DomainError("grid amplitudes must be finite");
    }
  }
  if (kernels::abs2_sum(amplitudes_) > 1.0 + kProbabilitySlack) {
    throw DomainError("grid total probability exceeds 1");
  }
}

JointAmplitudeGrid JointAmplitudeGrid::tabulate(AxisKind axis1_kind, Interval axis1, AxisKind axis2_kind,
                                                Interval axis2, const std::function<cplx(int, int)>& fn,
                                                Metadata metadata) {
  std::vector<cplx> cells(axis1.size() * axis2.size());
  const std::size_t width = axis2.size();
  parallel_for(axis1.size(), [&](std::size_t row) {
    const int v1 = axis1.lo + static_cast<int>(row);
    for (std::size_t col = 0; col < width; ++col) {
      cells[row * width + col] = fn(v1, axis2.lo + static_cast<int>(col));
    }
  });
  return {axis1_kind, axis1, axis2_kind, axis2, std::move(cells), std::move(metadata)};
}

cplx JointAmplitudeGrid::at(int v1, int v2) const {
  if (!axis1_.contains(v1) || !axis2_.contains(v2)) return {};
  const auto row = static_cast<std::size_t>(v1 - axis1_.lo);
  const auto col = static_cast<std::size_t>(v2 - axis2_.lo);
  return amplitudes_[row * axis2_.size() + col];
}

JointAmplitudeGrid JointAmplitudeGrid::with_metadata(Metadata extra) const {
  Metadata merged = metadata_;
  for (auto& entry : extra) merged.push_back(std::move(entry));
  return {axis1_kind_, axis1_, axis2_kind_, axis2_, amplitudes_, std::move(merged)};
}

double Marginal::at(int v) const {
  if (!range.contains(v)) return 0.0;
  return values[static_cast<std::size_t>(v - range.lo)];
}

double Marginal::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

Marginal marginalize(const JointAmplitudeGrid& grid, AxisKind axis) {
  const std::size_t rows = grid.axis1_range().size();
  const std::size_t cols = grid.axis2_range().size();
  const auto cells = grid.amplitudes();
  if (grid.axis1_kind() == axis) {
    Marginal m{axis, grid.axis1_range(), std::vector<double>(rows)};
    for (std::size_t r = 0; r < rows; ++r) m.values[r] = kernels::abs2_sum(cells.subspan(r * cols, cols));
    return m;
  }
  if (grid.axis2_kind() == axis) {
    Marginal m{axis, grid.axis2_range(), std::vector<double>(cols, 0.0)};
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) m.values[c] += std::norm(cells[r * cols + c]);
    }
    return m;
  }
  throw DomainError("grid has no axis of kind '" + std::string(axis_kind_name(axis)) + "'");
}

double total_probability(const JointAmplitudeGrid& grid) { return kernels::abs2_sum(grid.amplitudes()); }

Interval suggest_range(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw DomainError("suggest_range: mean must be finite and >= 0");
  const double spread = 10.0 * std::sqrt(mean);
  const int lo = static_cast<int>(std::floor(std::max(0.0, mean - spread)));
  const int hi = static_cast<int>(std::ceil(mean + spread + 10.0));
  return {lo, hi};
}

} // namespace qew
