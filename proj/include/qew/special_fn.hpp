#pragma once

// Special functions for the amplitude formulas and the fiber mode solver.
// Everything here is a pure function of its arguments.

namespace qew::special {

// ln Gamma(x) for x > 0. Throws DomainError for x <= 0; poles at the
// non-positive integers are the callers' business (a diverging factorial in
// a denominator makes that term vanish).
double log_gamma(double x);
// ln n! for n >= 0.
double log_factorial(int n);

// Bessel function of the first kind, integer order >= 0, x >= 0.
double bessel_j(int order, double x);
double bessel_j_prime(int order, double x);

struct BesselKValue {
  double value;
  bool underflow; // K(x) itself underflowed to zero; exp(x) K(x) is still available
};

// Modified Bessel function of the second kind, integer order >= 0, x > 0.
double bessel_k(int order, double x);
BesselKValue bessel_k_checked(int order, double x);
// exp(x) K_order(x); representable far beyond where K underflows.
double bessel_k_scaled(int order, double x);
double bessel_k_prime(int order, double x);

// Which algorithm produced a kernel sum.
enum class SeriesRoute {
  laguerre_recurrence, // terminating Kummer form, N >= k
  kummer_series,       // non-terminating positive Kummer series, N < k
  direct,              // the original alternating series, compensated
};

struct SeriesResult {
  double value;
  int terms_used;
  double tail_bound; // bound on |neglected tail| / |value|
};

struct LogSeriesResult {
  double log_abs;   // ln |S|; -inf when S == 0
  int sign;         // -1, 0, +1
  int terms_used;
  double tail_bound; // relative, as in SeriesResult
  double cancellation; // sum |terms| / |sum| for the route taken (1 if no cancellation)
  SeriesRoute route;
};

// S(N, k, x) = sum_{l>=0} (-x)^l (N+l)! / ((k+l)! l!)
//            = (N!/k!) 1F1(N+1; k+1; -x)
//            = exp(-x) (N!/k!) 1F1(k-N; k+1; x)            (Kummer)
// For N >= k the Kummer form terminates: exp(-x) (N-k)! L_{N-k}^{(k)}(x).
// The direct alternating series is used instead when it converges quickly
// and its measured cancellation stays below 1e4; N < k uses the direct
// series (compensated), whose cancellation is bounded by exp(2x) there.
LogSeriesResult kernel_sum_log(int big_n, int k, double x);
// Throws OverflowError when |S| is not representable.
SeriesResult kernel_sum(int big_n, int k, double x);

// Individual routes, exposed for cross-checking.
LogSeriesResult kernel_sum_kummer_log(int big_n, int k, double x);
LogSeriesResult kernel_sum_direct_log(int big_n, int k, double x, int max_terms = 1 << 20);

} // namespace qew::special
