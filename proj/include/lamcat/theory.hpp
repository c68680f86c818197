#pragma once

#include <span>
#include <vector>

namespace lamcat {

/// Hydrodynamic limits of the rescaled caterpillar counts, alpha in (1, 2]:
///   x_0(t) = (1+t)^(-1/(alpha-1))
///   x_1(t) = (1+t)^(-alpha/(alpha-1))
///   x_r(t) = (1+t)^(-alpha/(alpha-1)) (alpha t/(1+t))^(r-1) / (2 (r-1)!),  r >= 2
double x_r(double alpha, int r, double t);

/// Drift of the rescaled census at state (X_0, ..., X_rmax):
///   d0 = -X_0^alpha / (alpha-1)
///   d1 = -alpha/(alpha-1) X_1 X_0^(alpha-1)
///   d2 = alpha X_1^2 / (2 X_0^(2-alpha)) - alpha/(alpha-1) X_2 X_0^(alpha-1)
///   dr = alpha X_(r-1) X_1 / X_0^(2-alpha) - alpha/(alpha-1) X_r X_0^(alpha-1)
std::vector<double> drift_field(double alpha, std::span<const double> state);

struct DriftSolution {
  std::vector<double> t;
  std::vector<std::vector<double>> x;  // x[i][r] at time t[i]
  double sup_deviation = 0.0;          // max over t, r of |numeric - closed form|
};

// Classical fourth-order Runge-Kutta from x_0 = x_1 = 1, x_r = 0 (r >= 2).
DriftSolution integrate_drift(double alpha, int r_max, double horizon, double step);

/// Up-to-time caterpillar density: x_up(0) = 0 and
///   d/dt x_up_2 = alpha x_1^2 / (2 x_0^(2-alpha)),
///   d/dt x_up_r = alpha x_(r-1) x_1 / x_0^(2-alpha)      (r >= 3),
/// i.e. x_up_r(t) = alpha^(r-1)/(2 (r-2)!) int_0^t s^(r-2) (1+s)^(-r-alpha/(alpha-1)) ds.
/// Finite t is integrated adaptively after u = s/(1+s); t = +infinity returns
/// limit_constant.
double x_up(double alpha, int r, double t);

// Integrand of x_up in the original time variable.
double x_up_rate(double alpha, int r, double s);

/// Limit of xi_r / n: alpha^(r-1)/2 * Gamma(1 + alpha/(alpha-1)) / Gamma(r + alpha/(alpha-1)).
/// alpha = 2 evaluates 2^(r-1)/(r+1)! directly.
double limit_constant(double alpha, int r);

// The same constant by quadrature of x_up_rate over [0, infinity).
double limit_constant_by_quadrature(double alpha, int r);

}  // namespace lamcat
