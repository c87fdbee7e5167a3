#pragma once

// Small scalar numerics shared by the barrier and tunnelling code.

#include <functional>

namespace tunnelkit::numerics {

using ScalarFn = std::function<double(double)>;

struct QuadratureResult {
  double value;
  double abs_error;
  int evaluations;
};

/// Adaptive Gauss-Kronrod (7/15) quadrature on [a, b] with global interval
/// bisection. Stops when the summed error estimate falls below
/// max(abs_tol, rel_tol * |value|). Throws ConvergenceError when
/// `max_intervals` is exhausted first.
QuadratureResult integrate(const ScalarFn& f, double a, double b, double rel_tol = 1e-12,
                           double abs_tol = 0.0, int max_intervals = 2000);

/// Bisection for a sign change of f on [lo, hi]. Requires f(lo) and f(hi) of
/// opposite sign (or one of them zero).
double bisect(const ScalarFn& f, double lo, double hi, double x_tol = 1e-12, int max_iter = 400);

struct Extremum {
  double x;
  double value;
};

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
Extremum golden_section_max(const ScalarFn& f, double lo, double hi, double x_tol = 1e-13);

}  // namespace tunnelkit::numerics
