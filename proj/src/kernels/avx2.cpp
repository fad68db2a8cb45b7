// Compiled with -mavx2 -mfma; only called after a runtime CPU check.

#include "qew/kernels.hpp"

#include <immintrin.h>

#include <algorithm>

namespace qew::kernels::detail {

namespace {

// (ar + i ai) * [b0, b1] for two packed complex values.
inline __m256d cmul_broadcast(__m256d ar, __m256d ai, __m256d b) {
  const __m256d b_swapped = _mm256_permute_pd(b, 0b0101);
  return _mm256_fmaddsub_pd(ar, b, _mm256_mul_pd(ai, b_swapped));
}

} // namespace

void cgemm_avx2(std::size_t rows, std::size_t inner, std::size_t cols,
                const cplx* a, const cplx* b, cplx* c) {
  std::fill(c, c + rows * cols, cplx{});
  const std::size_t paired = cols & ~std::size_t{3};
  for (std::size_t i = 0; i < rows; ++i) {
    double* crow = reinterpret_cast<double*>(c + i * cols);
    for (std::size_t k = 0; k < inner; ++k) {
      const cplx aik = a[i * inner + k];
      if (aik == cplx{}) continue;
      const __m256d ar = _mm256_set1_pd(aik.real());
      const __m256d ai = _mm256_set1_pd(aik.imag());
      const double* brow = reinterpret_cast<const double*>(b + k * cols);
      std::size_t j = 0;
      for (; j < paired; j += 4) {
        const __m256d b0 = _mm256_loadu_pd(brow + 2 * j);
        const __m256d b1 = _mm256_loadu_pd(brow + 2 * j + 4);
        const __m256d c0 = _mm256_loadu_pd(crow + 2 * j);
        const __m256d c1 = _mm256_loadu_pd(crow + 2 * j + 4);
        _mm256_storeu_pd(crow + 2 * j, _mm256_add_pd(c0, cmul_broadcast(ar, ai, b0)));
        _mm256_storeu_pd(crow + 2 * j + 4, _mm256_add_pd(c1, cmul_broadcast(ar, ai, b1)));
      }
      for (; j + 2 <= cols; j += 2) {
        const __m256d b0 = _mm256_loadu_pd(brow + 2 * j);
        const __m256d c0 = _mm256_loadu_pd(crow + 2 * j);
        _mm256_storeu_pd(crow + 2 * j, _mm256_add_pd(c0, cmul_broadcast(ar, ai, b0)));
      }
      for (; j < cols; ++j) {
        const double br = brow[2 * j];
        const double bi = brow[2 * j + 1];
        crow[2 * j] += aik.real() * br - aik.imag() * bi;
        crow[2 * j + 1] += aik.real() * bi + aik.imag() * br;
      }
    }
  }
}

double abs2_sum_avx2(const cplx* z, std::size_t n) {
  const double* p = reinterpret_cast<const double*>(z);
  const std::size_t len = 2 * n;
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= len; i += 8) {
    const __m256d v0 = _mm256_loadu_pd(p + i);
    const __m256d v1 = _mm256_loadu_pd(p + i + 4);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    acc1 = _mm256_fmadd_pd(v1, v1, acc1);
  }
  const __m256d acc = _mm256_add_pd(acc0, acc1);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < len; ++i) total += p[i] * p[i];
  return total;
}

void axpby_avx2(double a, const cplx* x, double b, cplx* y, std::size_t n) {
  const double* xp = reinterpret_cast<const double*>(x);
  double* yp = reinterpret_cast<double*>(y);
  const std::size_t len = 2 * n;
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256d vy = _mm256_mul_pd(vb, _mm256_loadu_pd(yp + i));
    _mm256_storeu_pd(yp + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(xp + i), vy));
  }
  for (; i < len; ++i) yp[i] = a * xp[i] + b * yp[i];
}

} // namespace qew::kernels::detail
