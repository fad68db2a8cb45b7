#include "qew/special_fn.hpp"

#include "qew/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

namespace qew::special {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRescaleAbove = 1e250;

// Neumaier's variant of Kahan summation.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  [[nodiscard]] double value() const { return sum + carry; }
};

void require_nonnegative_order(int order, const char* fn) {
  if (order < 0) throw DomainError(std::string(fn) + ": order must be >= 0");
}

// Ascending series; used where x^2/4 < order + 1 so the terms decrease
// monotonically from the first.
double bessel_j_series(int n, double x) {
  const double half = 0.5 * x;
  const double q = -half * half;
  double term = std::exp(n * std::log(half) - log_factorial(n));
  double total = term;
  for (int m = 1; m < 500; ++m) {
    term *= q / (static_cast<double>(m) * (m + n));
    total += term;
    if (std::abs(term) < kEps * 1e-2 * std::abs(total)) break;
  }
  return total;
}

// Miller's backward recurrence normalised with J0 + 2 sum J_{2m} = 1.
double bessel_j_miller(int n, double x) {
  const double top = std::max<double>(n, x);
  int start = static_cast<int>(top + 20.0 + std::sqrt(60.0 * top));
  start += start % 2; // even, so the normalisation sum lines up
  double above = 0.0;  // J_{m+1}
  double current = 1e-300; // J_m at m = start (arbitrary seed)
  double norm = 0.0;
  double wanted = 0.0;
  for (int m = start; m > 0; --m) {
    const double below = (2.0 * m / x) * current - above;
    above = current;
    current = below; // now J_{m-1}
    const int order_now = m - 1;
    if (order_now == n) wanted = current;
    if (order_now > 0 && order_now % 2 == 0) norm += 2.0 * current;
    if (std::abs(current) > kRescaleAbove) {
      current *= 1e-250;
      above *= 1e-250;
      norm *= 1e-250;
      wanted *= 1e-250;
    }
  }
  norm += current; // J_0
  return wanted / norm;
}

// I0, I1 by their (positive) ascending series; x <= 2 here.
void bessel_i01(double x, double& i0, double& i1) {
  const double q = 0.25 * x * x;
  double t0 = 1.0;
  double t1 = 0.5 * x;
  i0 = t0;
  i1 = t1;
  for (int m = 1; m < 60; ++m) {
    t0 *= q / (static_cast<double>(m) * m);
    t1 *= q / (static_cast<double>(m) * (m + 1));
    i0 += t0;
    i1 += t1;
    if (t0 < kEps * 1e-2 * i0 && t1 < kEps * 1e-2 * i1) break;
  }
}

// exp(x) K0(x), exp(x) K1(x).
void bessel_k01_scaled(double x, double& k0, double& k1) {
  if (x <= 2.0) {
    double i0 = 0.0;
    double i1 = 0.0;
    bessel_i01(x, i0, i1);
    const double q = 0.25 * x * x;
    double term = 1.0;
    double harmonic = 0.0;
    double series = 0.0;
    for (int m = 1; m < 60; ++m) {
      term *= q / (static_cast<double>(m) * m);
      harmonic += 1.0 / m;
      series += term * harmonic;
      if (term * harmonic < kEps * 1e-2 * std::abs(series)) break;
    }
    const double raw_k0 = -(std::log(0.5 * x) + std::numbers::egamma) * i0 + series;
    // Wronskian I0 K1 + I1 K0 = 1/x.
    const double raw_k1 = (1.0 / x - i1 * raw_k0) / i0;
    const double ex = std::exp(x);
    k0 = raw_k0 * ex;
    k1 = raw_k1 * ex;
    return;
  }
  // Steed's continued fraction (CF2) for order 0, Thompson-Barnett form.
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i < 10000; ++i) {
    a -= 2 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps * 0.5) break;
  }
  h = a1 * h;
  k0 = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
  k1 = k0 * (x + 0.5 - h) / x;
}

LogSeriesResult zero_result(SeriesRoute route) {
  return {-kInf, 0, 1, 0.0, 1.0, route};
}

// Terminating Kummer form through the three-term Laguerre recurrence.
LogSeriesResult laguerre_route(int big_n, int k, double x) {
  const int m = big_n - k;
  double prev = 1.0;
  double cur = 1.0;
  double log_scale = 0.0;
  if (m >= 1) {
    cur = 1.0 + k - x;
    for (int j = 1; j < m; ++j) {
      const double next = ((2.0 * j + 1.0 + k - x) * cur - (j + static_cast<double>(k)) * prev) / (j + 1.0);
      prev = cur;
      cur = next;
      if (std::abs(cur) > kRescaleAbove) {
        cur *= 1e-250;
        prev *= 1e-250;
        log_scale += 250.0 * std::numbers::ln10;
      }
    }
  }
  if (cur == 0.0) return zero_result(SeriesRoute::laguerre_recurrence);
  return {-x + log_factorial(m) + std::log(std::abs(cur)) + log_scale, cur > 0 ? 1 : -1, m + 1, 0.0, 1.0,
          SeriesRoute::laguerre_recurrence};
}

// Non-terminating Kummer series for N < k: every term is positive.
LogSeriesResult kummer_series_route(int big_n, int k, double x) {
  double term = 1.0;
  double total = 1.0;
  int used = 1;
  for (int m = 0; m < 100000; ++m) {
    term *= x * (k - big_n + m) / ((k + 1.0 + m) * (m + 1.0));
    total += term;
    ++used;
    if (term < 1e-17 * total) break;
  }
  return {log_factorial(big_n) - log_factorial(k) - x + std::log(total), 1, used, term / total, 1.0,
          SeriesRoute::kummer_series};
}

// Original alternating series on terms scaled by the first one, N!/k!.
// Stops after three consecutive terms below 1e-16 of the largest partial sum
// seen. Returns nullopt if the budget runs out or a term overflows.
std::optional<LogSeriesResult> direct_route(int big_n, int k, double x, int max_terms) {
  const double log_first = log_factorial(big_n) - log_factorial(k);
  if (x == 0.0) return LogSeriesResult{log_first, 1, 1, 0.0, 1.0, SeriesRoute::direct};
  CompensatedSum sum;
  sum.add(1.0);
  double abs_sum = 1.0;
  double running_max = 1.0;
  double term = 1.0;
  int quiet = 0;
  int used = 1;
  for (int l = 0; quiet < 3; ++l) {
    if (used >= max_terms) return std::nullopt;
    term *= -x * (big_n + l + 1.0) / ((k + l + 1.0) * (l + 1.0));
    if (!std::isfinite(term)) return std::nullopt;
    sum.add(term);
    abs_sum += std::abs(term);
    ++used;
    running_max = std::max(running_max, std::abs(sum.value()));
    quiet = std::abs(term) < 1e-16 * running_max ? quiet + 1 : 0;
  }
  const double value = sum.value();
  if (value == 0.0) return zero_result(SeriesRoute::direct);
  return LogSeriesResult{log_first + std::log(std::abs(value)), value > 0 ? 1 : -1, used,
                         std::abs(term) / std::abs(value), abs_sum / std::abs(value), SeriesRoute::direct};
}

void validate_kernel_args(int big_n, int k, double x) {
  if (big_n < 0 || k < 0) throw DomainError("kernel_sum: N and k must be >= 0");
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("kernel_sum: x must be finite and >= 0");
}

} // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: x must be > 0");
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double log_factorial(int n) {
  if (n < 0) throw DomainError("log_factorial: n must be >= 0");
  if (n < 2) return 0.0;
  return log_gamma(n + 1.0);
}

double bessel_j(int order, double x) {
  require_nonnegative_order(order, "bessel_j");
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("bessel_j: x must be finite and >= 0");
  if (x == 0.0) return order == 0 ? 1.0 : 0.0;
  if (0.25 * x * x < order + 1.0) return bessel_j_series(order, x);
  return bessel_j_miller(order, x);
}

double bessel_j_prime(int order, double x) {
  require_nonnegative_order(order, "bessel_j_prime");
  if (order == 0) return -bessel_j(1, x);
  return 0.5 * (bessel_j(order - 1, x) - bessel_j(order + 1, x));
}

double bessel_k_scaled(int order, double x) {
  require_nonnegative_order(order, "bessel_k");
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("bessel_k: x must be finite and > 0");
  double k0 = 0.0;
  double k1 = 0.0;
  bessel_k01_scaled(x, k0, k1);
  if (order == 0) return k0;
  // Upward recurrence is stable for K.
  double lower = k0;
  double current = k1;
  for (int m = 1; m < order; ++m) {
    const double next = lower + (2.0 * m / x) * current;
    lower = current;
    current = next;
  }
  return current;
}

BesselKValue bessel_k_checked(int order, double x) {
  const double scaled = bessel_k_scaled(order, x);
  if (std::isinf(scaled)) throw OverflowError("bessel_k: K_order(x) overflows");
  const double value = scaled * std::exp(-x);
  return {value, value == 0.0 || value < std::numeric_limits<double>::min()};
}

double bessel_k(int order, double x) {
  const BesselKValue r = bessel_k_checked(order, x);
  return r.underflow ? 0.0 : r.value;
}

double bessel_k_prime(int order, double x) {
  require_nonnegative_order(order, "bessel_k_prime");
  if (order == 0) return -bessel_k(1, x);
  return -bessel_k(order - 1, x) - (order / x) * bessel_k(order, x);
}

LogSeriesResult kernel_sum_kummer_log(int big_n, int k, double x) {
  validate_kernel_args(big_n, k, x);
  if (big_n >= k) return laguerre_route(big_n, k, x);
  return kummer_series_route(big_n, k, x);
}

LogSeriesResult kernel_sum_direct_log(int big_n, int k, double x, int max_terms) {
  validate_kernel_args(big_n, k, x);
  if (auto r = direct_route(big_n, k, x, max_terms)) return *r;
  throw NumericalError("kernel_sum: direct series did not converge within the term budget");
}

LogSeriesResult kernel_sum_log(int big_n, int k, double x) {
  validate_kernel_args(big_n, k, x);
  constexpr double kMaxCancellation = 1e4;
  if (big_n < k) {
    if (auto r = direct_route(big_n, k, x, 1 << 16); r && r->cancellation <= kMaxCancellation) return *r;
    return kummer_series_route(big_n, k, x);
  }
  const int m = big_n - k;
  if (m > 32) {
    // For long recurrences a quickly converging direct series is cheaper;
    // keep it only when its measured cancellation is mild.
    if (auto r = direct_route(big_n, k, x, std::min(m, 4096)); r && r->cancellation <= kMaxCancellation) return *r;
  }
  return laguerre_route(big_n, k, x);
}

SeriesResult kernel_sum(int big_n, int k, double x) {
  const LogSeriesResult r = kernel_sum_log(big_n, k, x);
  if (r.sign == 0) return {0.0, r.terms_used, r.tail_bound};
  if (r.log_abs > std::log(std::numeric_limits<double>::max())) {
    throw OverflowError("kernel_sum: |S| exceeds the double range; use kernel_sum_log");
  }
  return {r.sign * std::exp(r.log_abs), r.terms_used, r.tail_bound};
}

} // namespace qew::special
