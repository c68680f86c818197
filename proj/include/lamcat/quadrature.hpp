#pragma once

#include <functional>

namespace lamcat {

struct QuadratureResult {
  double value;
  double error_estimate;
  double l1_norm;
};

// Adaptive Gauss-Kronrod without the accuracy check; callers combining
// several pieces check the summed error themselves.
QuadratureResult integrate_unchecked(const std::function<double(double)>& f, double a, double b,
                                     double rel_tol);

/// Adaptive Gauss-Kronrod on [a, b]; b may be +infinity. Throws NumericError
/// when the error estimate exceeds max(abs_tol, rel_tol * |value|).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-10, double abs_tol = 0.0);

}  // namespace lamcat
