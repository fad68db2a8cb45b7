#include <doctest.h>

#include "qew/error.hpp"
#include "qew/special_fn.hpp"
#include "reference.hpp"

#include <cmath>
#include <limits>

using namespace qew::special;

TEST_CASE("log_gamma values and domain") {
  CHECK(log_gamma(1.0) == doctest::Approx(0.0));
  CHECK(std::abs(log_gamma(2.0)) < 1e-15);
  CHECK(log_gamma(11.0) == doctest::Approx(std::log(3628800.0)).epsilon(1e-13));
  CHECK_THROWS_AS(log_gamma(0.0), qew::DomainError);
  CHECK_THROWS_AS(log_gamma(-2.5), qew::DomainError);
  CHECK(log_factorial(0) == 0.0);
  CHECK(log_factorial(20) == doctest::Approx(std::log(2432902008176640000.0)).epsilon(1e-14));
  CHECK_THROWS_AS(log_factorial(-1), qew::DomainError);
}

TEST_CASE("log_gamma recurrence on [0.5, 100]") {
  ref::Draws d(31);
  for (int i = 0; i < 200; ++i) {
    const double x = d.uniform(0.5, 100.0);
    CHECK(std::abs(log_gamma(x + 1.0) - log_gamma(x) - std::log(x)) < 1e-12);
  }
}

TEST_CASE("Stirling ratio for factorials near N = 400") {
  const int n = 400;
  for (int l = 0; l <= 5; ++l) {
    const double ratio = std::exp(log_gamma(n + l + 1.0) - log_gamma(n + 1.0) - l * std::log(n));
    CHECK(std::abs(ratio - 1.0) <= 3.0 * l * l / n + 1e-14);
  }
}

TEST_CASE("bessel_j special values") {
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(1, 0.0) == 0.0);
  CHECK(bessel_j(5, 0.0) == 0.0);
  CHECK_THROWS_AS(bessel_j(-1, 1.0), qew::DomainError);
  CHECK_THROWS_AS(bessel_j(0, -1.0), qew::DomainError);
}

TEST_CASE("first zero of J0 lies in [2.40, 2.41]") {
  CHECK(ref::bessel_j(0, 2.40) > 0.0);
  CHECK(ref::bessel_j(0, 2.41) < 0.0);
  CHECK(bessel_j(0, 2.40) > 0.0);
  CHECK(bessel_j(0, 2.41) < 0.0);
  double lo = 2.40, hi = 2.41;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (bessel_j(0, mid) > 0.0 ? lo : hi) = mid;
  }
  CHECK(std::abs(ref::bessel_j(0, lo)) < 1e-14);
}

TEST_CASE("bessel_j against the extended-precision series") {
  ref::Draws d(32);
  for (int i = 0; i < 300; ++i) {
    const int n = d.integer(0, 40);
    const double x = d.uniform(0.0, 30.0);
    const double expect = ref::bessel_j(n, x);
    const double got = bessel_j(n, x);
    CHECK(std::abs(got - expect) <= 1e-12 * std::abs(expect) + 1e-14);
  }
}

TEST_CASE("bessel_j three-term recurrence") {
  for (int nu = 1; nu <= 10; ++nu) {
    for (double x : {0.5, 1.0, 2.0, 5.0, 10.0}) {
      const double lhs = bessel_j(nu - 1, x) + bessel_j(nu + 1, x);
      CHECK(std::abs(lhs - 2.0 * nu / x * bessel_j(nu, x)) < 1e-10);
    }
  }
}

TEST_CASE("bessel_j large orders and arguments stay bounded and normalised") {
  for (double x : {50.0, 200.0, 1000.0}) {
    double sum = bessel_j(0, x) * bessel_j(0, x);
    for (int n = 1; n < static_cast<int>(x) + 200; ++n) sum += 2.0 * bessel_j(n, x) * bessel_j(n, x);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("bessel_j_prime identity") {
  for (double x : {0.3, 2.0, 7.5}) {
    CHECK(bessel_j_prime(0, x) == doctest::Approx(-bessel_j(1, x)));
    CHECK(bessel_j_prime(3, x) == doctest::Approx(0.5 * (bessel_j(2, x) - bessel_j(4, x))));
    const double h = 1e-5;
    CHECK(bessel_j_prime(1, x) == doctest::Approx((bessel_j(1, x + h) - bessel_j(1, x - h)) / (2 * h)).epsilon(1e-8));
  }
}

TEST_CASE("bessel_k limits and reference") {
  const double x = 50.0;
  CHECK(std::abs(bessel_k(1, x) * std::sqrt(2.0 * x / M_PI) * std::exp(x) - 1.0) < 1e-2);
  CHECK(std::abs(bessel_k_scaled(1, x) * std::sqrt(2.0 * x / M_PI) / (1.0 + 3.0 / (8.0 * x)) - 1.0) < 1e-3);
  CHECK(std::abs(1e-4 * bessel_k(1, 1e-4) - 1.0) < 1e-3);
  CHECK(bessel_k(1, 1.0) == doctest::Approx(ref::bessel_k1_integral(1.0)).epsilon(1e-10));
  for (double v : {0.3, 1.7, 2.0, 2.5, 6.0, 19.0}) {
    CHECK(bessel_k(1, v) == doctest::Approx(ref::bessel_k1_integral(v)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(bessel_k(0, 0.0), qew::DomainError);
  CHECK_THROWS_AS(bessel_k(0, -1.0), qew::DomainError);
}

TEST_CASE("bessel_k asymptotic identity at x = 50") {
  // K_1(x) sqrt(2x/pi) e^x = 1 + 3/(8x) - 15/(128x^2) + ...
  const double x = 50.0;
  const double scaled = bessel_k_scaled(1, x) * std::sqrt(2.0 * x / M_PI);
  CHECK(std::abs(scaled - (1.0 + 3.0 / (8 * x) - 15.0 / (128 * x * x))) < 1e-6);
}

TEST_CASE("bessel_k derivative consistency") {
  for (double x : {0.05, 0.9, 2.0, 3.3, 12.0}) {
    const double kp = bessel_k_prime(1, x);
    CHECK(std::abs(kp + 0.5 * (bessel_k(0, x) + bessel_k(2, x))) <= 1e-10 * std::abs(kp));
  }
  CHECK(bessel_k_prime(0, 1.5) == doctest::Approx(-bessel_k(1, 1.5)));
}

TEST_CASE("bessel_k underflow is flagged") {
  const BesselKValue v = bessel_k_checked(1, 800.0);
  CHECK(v.underflow);
  CHECK(bessel_k(1, 800.0) == 0.0);
  CHECK(std::isfinite(bessel_k_scaled(1, 800.0)));
  CHECK_FALSE(bessel_k_checked(1, 10.0).underflow);
}

TEST_CASE("kernel_sum trivial cases") {
  for (int n : {0, 3, 10}) {
    for (int k : {0, 2, 7}) {
      const double expect = std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0));
      CHECK(kernel_sum(n, k, 0.0).value == doctest::Approx(expect).epsilon(1e-14));
    }
  }
  for (double x : {0.0, 0.5, 3.0, 20.0}) {
    CHECK(kernel_sum(0, 0, x).value == doctest::Approx(std::exp(-x)).epsilon(1e-13));
  }
}

TEST_CASE("kernel_sum S(3, 1, 0.25) against exact rational summation") {
  const ref::rational x(1, 4);
  const double expect = static_cast<double>(ref::kernel_sum_rational(3, 1, x, 60));
  const SeriesResult r = kernel_sum(3, 1, 0.25);
  CHECK(std::abs(r.value - expect) <= 1e-12 * std::abs(expect));
  CHECK(r.terms_used >= 1);
  CHECK(r.tail_bound >= 0.0);
}

TEST_CASE("Kummer and direct routes agree on N, k <= 30, x <= 4") {
  for (int n = 0; n <= 30; ++n) {
    for (int k = 0; k <= 30; ++k) {
      for (double x : {0.1, 0.7, 1.5, 2.5, 4.0}) {
        const double exact = static_cast<double>(ref::kernel_sum(n, k, x));
        const LogSeriesResult kum = kernel_sum_kummer_log(n, k, x);
        const LogSeriesResult hyb = kernel_sum_log(n, k, x);
        const double kv = kum.sign * std::exp(kum.log_abs);
        const double hv = hyb.sign * std::exp(hyb.log_abs);
        // S(4, 3, 4) is exactly zero; the reference then carries 50-digit noise.
        CHECK(std::abs(kv - exact) <= 1e-9 * std::abs(exact) + 1e-40);
        CHECK(std::abs(hv - exact) <= 1e-10 * std::abs(exact) + 1e-40);
      }
    }
  }
}

TEST_CASE("direct route agrees where it is well conditioned") {
  for (int n = 0; n <= 12; ++n) {
    for (int k = 0; k <= 12; ++k) {
      const LogSeriesResult d = kernel_sum_direct_log(n, k, 0.5);
      const double exact = static_cast<double>(ref::kernel_sum(n, k, 0.5));
      CHECK(d.cancellation >= 1.0);
      CHECK(std::abs(d.sign * std::exp(d.log_abs) - exact) <= 1e-12 * d.cancellation * std::abs(exact));
    }
  }
  CHECK_THROWS_AS(kernel_sum_direct_log(2000, 0, 900.0, 50), qew::NumericalError);
}

TEST_CASE("kernel_sum rejects bad arguments and signals overflow") {
  CHECK_THROWS_AS(kernel_sum(-1, 0, 1.0), qew::DomainError);
  CHECK_THROWS_AS(kernel_sum(0, -1, 1.0), qew::DomainError);
  CHECK_THROWS_AS(kernel_sum(0, 0, -1.0), qew::DomainError);
  CHECK_THROWS_AS(kernel_sum(400, 0, 0.0), qew::OverflowError);
  const LogSeriesResult big = kernel_sum_log(400, 0, 0.0);
  CHECK(big.log_abs == doctest::Approx(std::lgamma(401.0)).epsilon(1e-13));
}

TEST_CASE("kernel_sum large N stays accurate against extended precision") {
  for (int n : {60, 150, 400}) {
    for (int k : {0, 5, 40}) {
      for (double x : {0.01, 0.25, 4.0}) {
        const ref::big exact = ref::kernel_sum(n, k, x);
        const LogSeriesResult r = kernel_sum_log(n, k, x);
        const double exact_log = static_cast<double>(log(abs(exact)));
        CHECK(r.sign == (exact < 0 ? -1 : 1));
        CHECK(std::abs(r.log_abs - exact_log) < 1e-10);
      }
    }
  }
}
