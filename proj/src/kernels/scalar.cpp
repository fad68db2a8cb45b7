#include "qew/kernels.hpp"

#include <algorithm>

namespace qew::kernels::detail {

void cgemm_scalar(std::size_t rows, std::size_t inner, std::size_t cols,
                  const cplx* a, const cplx* b, cplx* c) {
  std::fill(c, c + rows * cols, cplx{});
  for (std::size_t i = 0; i < rows; ++i) {
    cplx* crow = c + i * cols;
    for (std::size_t k = 0; k < inner; ++k) {
      const cplx aik = a[i * inner + k];
      if (aik == cplx{}) continue;
      const double ar = aik.real();
      const double ai = aik.imag();
      const cplx* brow = b + k * cols;
      for (std::size_t j = 0; j < cols; ++j) {
        // Spelled out: operator* on std::complex carries NaN/inf recovery
        // branches that block vectorization and are irrelevant here.
        const double br = brow[j].real();
        const double bi = brow[j].imag();
        crow[j] = cplx(crow[j].real() + ar * br - ai * bi,
                       crow[j].imag() + ar * bi + ai * br);
      }
    }
  }
}

double abs2_sum_scalar(const cplx* z, std::size_t n) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
  }
  return total;
}

void axpby_scalar(double a, const cplx* x, double b, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = cplx(a * x[i].real() + b * y[i].real(), a * x[i].imag() + b * y[i].imag());
  }
}

} // namespace qew::kernels::detail
