#pragma once

// Independent reference values for the unit tests: extended-precision
// series and quadratures that share no code with the library.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <random>

namespace ref {

using big = boost::multiprecision::cpp_bin_float_50;
using rational = boost::multiprecision::cpp_rational;

// J_n(x) from the ascending series in 50 digits; fine for x up to ~30.
inline double bessel_j(int n, double xd) {
  const big x = xd;
  const big q = -(x * x) / 4;
  big term = 1;
  for (int i = 1; i <= n; ++i) term *= x / (2 * i);
  big sum = term;
  for (int m = 1; m < 400; ++m) {
    term *= q / (big(m) * (m + n));
    sum += term;
    if (abs(term) < big("1e-45") * (abs(sum) + big("1e-300"))) break;
  }
  return static_cast<double>(sum);
}

// K_1(x) = int_0^inf exp(-x cosh t) cosh t dt, trapezoid rule (which
// converges geometrically for this analytic, doubly decaying integrand).
inline double bessel_k1_integral(double x) {
  const long double h = 1.0L / 256;
  long double sum = 0.5L * std::exp(-static_cast<long double>(x));
  for (int i = 1;; ++i) {
    const long double t = i * h;
    const long double v = std::exp(-x * std::cosh(t)) * std::cosh(t);
    sum += v;
    if (v < 1e-30L * sum) break;
  }
  return static_cast<double>(sum * h);
}

// S(N, k, x) = sum_l (-x)^l (N+l)! / ((k+l)! l!), summed in 50 digits.
inline big kernel_sum(int big_n, int k, double xd) {
  const big x = xd;
  big term = 1;
  for (int i = k + 1; i <= big_n; ++i) term *= i;
  for (int i = big_n + 1; i <= k; ++i) term /= i;
  big sum = term;
  for (int l = 0; l < 4000; ++l) {
    term *= -x * (big_n + l + 1) / (big(k + l + 1) * (l + 1));
    sum += term;
    if (l > 2 * xd && abs(term) < big("1e-40") * abs(sum)) break;
  }
  return sum;
}

// Same sum with exact rationals over the first `terms` terms.
inline rational kernel_sum_rational(int big_n, int k, const rational& x, int terms) {
  auto fact = [](int n) {
    boost::multiprecision::cpp_int f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  rational sum = 0;
  rational power = 1;
  for (int l = 0; l < terms; ++l) {
    sum += power * rational(fact(big_n + l), fact(k + l) * fact(l));
    power *= -x;
  }
  return sum;
}

inline double poisson(double mean, int k) {
  return std::exp(-mean + k * std::log(mean) - std::lgamma(k + 1.0));
}

// Fixed-seed generator for property tests.
struct Draws {
  std::mt19937_64 engine;
  explicit Draws(std::uint64_t seed) : engine(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine); }
  std::complex<double> cplx(double scale) { return {uniform(-scale, scale), uniform(-scale, scale)}; }
};

} // namespace ref
