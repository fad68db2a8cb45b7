#pragma once

#include <functional>

namespace qew::quad {

struct QuadResult {
  double value = 0.0;
  double error = 0.0; // estimated absolute error
  int evaluations = 0;
  bool converged = false;
};

// Globally adaptive Gauss-Kronrod (7/15) on the finite interval [a, b].
// Stops when the summed error estimate is below max(abs_tol, rel_tol |value|)
// or after max_intervals subdivisions (converged == false then).
QuadResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-10,
                     double abs_tol = 0.0, int max_intervals = 4000);

} // namespace qew::quad
