#include "qew/kernels.hpp"

#include "qew/error.hpp"

#include <cstdlib>
#include <string>

namespace qew::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(QEW_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported;
#else
  return false;
#endif
}

Isa resolve_active() {
  if (const char* env = std::getenv("QEW_SIMD")) {
    if (std::string(env) == "scalar") return Isa::scalar;
  }
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

void require(Isa isa) {
  if (!isa_available(isa)) {
    throw DomainError("kernel variant '" + std::string(isa_name(isa)) + "' is not available");
  }
}

void check_gemm_shapes(std::size_t rows, std::size_t inner, std::size_t cols,
                       std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c) {
  if (a.size() != rows * inner || b.size() != inner * cols || c.size() != rows * cols) {
    throw DomainError("cgemm: operand sizes do not match the declared shape");
  }
}

} // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
  case Isa::scalar: return "scalar";
  case Isa::avx2: return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
  case Isa::scalar: return true;
  case Isa::avx2: return cpu_has_avx2();
  }
  return false;
}

Isa active_isa() {
  static const Isa active = resolve_active();
  return active;
}

void cgemm(Isa isa, std::size_t rows, std::size_t inner, std::size_t cols,
           std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c) {
  check_gemm_shapes(rows, inner, cols, a, b, c);
  require(isa);
#if defined(QEW_WITH_AVX2)
  if (isa == Isa::avx2) {
    detail::cgemm_avx2(rows, inner, cols, a.data(), b.data(), c.data());
    return;
  }
#endif
  detail::cgemm_scalar(rows, inner, cols, a.data(), b.data(), c.data());
}

void cgemm(std::size_t rows, std::size_t inner, std::size_t cols,
           std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c) {
  cgemm(active_isa(), rows, inner, cols, a, b, c);
}

double abs2_sum(Isa isa, std::span<const cplx> z) {
  require(isa);
#if defined(QEW_WITH_AVX2)
  if (isa == Isa::avx2) return detail::abs2_sum_avx2(z.data(), z.size());
#endif
  return detail::abs2_sum_scalar(z.data(), z.size());
}

double abs2_sum(std::span<const cplx> z) { return abs2_sum(active_isa(), z); }

void axpby(Isa isa, double a, std::span<const cplx> x, double b, std::span<cplx> y) {
  if (x.size() != y.size()) throw DomainError("axpby: operand sizes differ");
  require(isa);
#if defined(QEW_WITH_AVX2)
  if (isa == Isa::avx2) {
    detail::axpby_avx2(a, x.data(), b, y.data(), y.size());
    return;
  }
#endif
  detail::axpby_scalar(a, x.data(), b, y.data(), y.size());
}

void axpby(double a, std::span<const cplx> x, double b, std::span<cplx> y) {
  axpby(active_isa(), a, x, b, y);
}

} // namespace qew::kernels
