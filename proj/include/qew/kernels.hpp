#pragma once

// Data-parallel inner loops shared by the oracle exponential and grid
// reductions. Every kernel has a scalar reference implementation; wider
// variants are selected at runtime from what the CPU reports, and can be
// forced back to scalar with QEW_SIMD=scalar.
//
// Complex arrays are std::complex<double>, i.e. interleaved (re, im) pairs.
// Matrices are dense and row-major.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace qew::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

// True if this build contains the variant and the running CPU supports it.
bool isa_available(Isa isa);

// Widest available variant, unless QEW_SIMD=scalar is set.
Isa active_isa();

// C (rows x cols) = A (rows x inner) * B (inner x cols). C is overwritten.
void cgemm(std::size_t rows, std::size_t inner, std::size_t cols,
           std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c);
void cgemm(Isa isa, std::size_t rows, std::size_t inner, std::size_t cols,
           std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c);

// Sum of |z|^2.
double abs2_sum(std::span<const cplx> z);
double abs2_sum(Isa isa, std::span<const cplx> z);

// y <- a*x + b*y with real a, b.
void axpby(double a, std::span<const cplx> x, double b, std::span<cplx> y);
void axpby(Isa isa, double a, std::span<const cplx> x, double b, std::span<cplx> y);

namespace detail {

void cgemm_scalar(std::size_t rows, std::size_t inner, std::size_t cols,
                  const cplx* a, const cplx* b, cplx* c);
double abs2_sum_scalar(const cplx* z, std::size_t n);
void axpby_scalar(double a, const cplx* x, double b, cplx* y, std::size_t n);

#if defined(QEW_WITH_AVX2)
void cgemm_avx2(std::size_t rows, std::size_t inner, std::size_t cols,
                const cplx* a, const cplx* b, cplx* c);
double abs2_sum_avx2(const cplx* z, std::size_t n);
void axpby_avx2(double a, const cplx* x, double b, cplx* y, std::size_t n);
#endif

} // namespace detail

} // namespace qew::kernels
