#include <doctest.h>

#include "qew/error.hpp"
#include "qew/kernels.hpp"
#include "reference.hpp"

#include <vector>

using qew::kernels::cplx;
using qew::kernels::Isa;

namespace {

std::vector<cplx> random_vector(ref::Draws& d, std::size_t n) {
  std::vector<cplx> v(n);
  for (auto& z : v) z = d.cplx(1.0);
  return v;
}

std::vector<cplx> naive_product(std::size_t rows, std::size_t inner, std::size_t cols, const std::vector<cplx>& a,
                                const std::vector<cplx>& b) {
  std::vector<cplx> c(rows * cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      cplx acc{};
      for (std::size_t k = 0; k < inner; ++k) acc += a[i * inner + k] * b[k * cols + j];
      c[i * cols + j] = acc;
    }
  return c;
}

double max_diff(const std::vector<cplx>& x, const std::vector<cplx>& y) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

} // namespace

TEST_CASE("scalar cgemm matches a naive triple loop") {
  ref::Draws d(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rows = static_cast<std::size_t>(d.integer(1, 17));
    const auto inner = static_cast<std::size_t>(d.integer(1, 17));
    const auto cols = static_cast<std::size_t>(d.integer(1, 17));
    const auto a = random_vector(d, rows * inner);
    const auto b = random_vector(d, inner * cols);
    std::vector<cplx> c(rows * cols, cplx(9.0, 9.0));
    qew::kernels::cgemm(Isa::scalar, rows, inner, cols, a, b, c);
    CHECK(max_diff(c, naive_product(rows, inner, cols, a, b)) < 1e-13);
  }
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  if (!qew::kernels::isa_available(Isa::avx2)) {
    MESSAGE("AVX2 not available; equivalence skipped");
    return;
  }
  ref::Draws d(12);
  for (int trial = 0; trial < 40; ++trial) {
    const auto rows = static_cast<std::size_t>(d.integer(1, 33));
    const auto inner = static_cast<std::size_t>(d.integer(1, 33));
    const auto cols = static_cast<std::size_t>(d.integer(1, 33));
    const auto a = random_vector(d, rows * inner);
    const auto b = random_vector(d, inner * cols);
    std::vector<cplx> c_scalar(rows * cols);
    std::vector<cplx> c_avx(rows * cols);
    qew::kernels::cgemm(Isa::scalar, rows, inner, cols, a, b, c_scalar);
    qew::kernels::cgemm(Isa::avx2, rows, inner, cols, a, b, c_avx);
    CHECK(max_diff(c_scalar, c_avx) < 1e-13);

    const auto x = random_vector(d, rows * cols);
    CHECK(qew::kernels::abs2_sum(Isa::avx2, x) ==
          doctest::Approx(qew::kernels::abs2_sum(Isa::scalar, x)).epsilon(1e-14));

    auto y1 = random_vector(d, x.size());
    auto y2 = y1;
    qew::kernels::axpby(Isa::scalar, 0.75, x, -1.25, y1);
    qew::kernels::axpby(Isa::avx2, 0.75, x, -1.25, y2);
    CHECK(max_diff(y1, y2) < 1e-15);
  }
}

TEST_CASE("kernel shape checks") {
  std::vector<cplx> a(6), b(6), c(3);
  CHECK_THROWS_AS(qew::kernels::cgemm(2, 3, 2, a, b, c), qew::DomainError);
  CHECK(qew::kernels::abs2_sum(std::vector<cplx>{}) == 0.0);
  std::vector<cplx> y(2);
  CHECK_THROWS_AS(qew::kernels::axpby(1.0, a, 1.0, y), qew::DomainError);
}

TEST_CASE("active isa is reported by name") {
  const Isa isa = qew::kernels::active_isa();
  CHECK(qew::kernels::isa_available(isa));
  CHECK_FALSE(qew::kernels::isa_name(isa).empty());
}
