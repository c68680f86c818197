#include "lamcat/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "lamcat/errors.hpp"

namespace lamcat {

QuadratureResult integrate_unchecked(const std::function<double(double)>& f, double a, double b,
                                     double rel_tol) {
  constexpr unsigned max_depth = 20;
  double error = 0.0;
  double l1 = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, rel_tol,
                                                                     &error, &l1);
  return {value, error, l1};
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol, double abs_tol) {
  const auto accepted = [&](const QuadratureResult& r) {
    // Boost terminates on error <= rel_tol * L1; cancellation can make |value|
    // much smaller than L1, so the contract is re-checked against |value|.
    const double allowed = std::max(abs_tol, rel_tol * std::abs(r.value));
    return std::isfinite(r.value) && (r.error_estimate <= allowed || r.error_estimate <= 1e-15 * r.l1_norm);
  };
  auto result = integrate_unchecked(f, a, b, rel_tol);
  if (accepted(result)) return result;

  // Endpoint singularities defeat Gauss-Kronrod bisection; tanh-sinh clusters
  // nodes at the endpoints instead.
  try {
    boost::math::quadrature::tanh_sinh<double> ts(12);
    QuadratureResult alt;
    alt.value = ts.integrate(f, a, b, rel_tol, &alt.error_estimate, &alt.l1_norm);
    if (accepted(alt)) return alt;
    if (std::isfinite(alt.value) && (!std::isfinite(result.value) || alt.error_estimate < result.error_estimate)) result = alt;
  } catch (const std::exception&) {
  }

  if (!std::isfinite(result.value)) throw NumericError("integrate: non-finite result", result.error_estimate);
  throw NumericError("integrate: requested tolerance not reached (achieved " +
                         std::to_string(result.error_estimate / std::max(std::abs(result.value), 1e-300)) + ")",
                     result.error_estimate);
}

}  // namespace lamcat
