#include "lamcat/theory.hpp"

#include <cmath>
#include <limits>

#include "lamcat/errors.hpp"
#include "lamcat/quadrature.hpp"
#include "lamcat/special.hpp"

namespace lamcat {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 1.0 && alpha <= 2.0)) throw DomainError("alpha must lie in (1, 2]");
}

void require_time(double t) {
  if (!(t >= 0.0)) throw DomainError("time must be nonnegative");
}

}  // namespace

double x_r(double alpha, int r, double t) {
  require_alpha(alpha);
  require_time(t);
  if (r < 0) throw DomainError("x_r: r must be >= 0");
  const double e = 1.0 / (alpha - 1.0);
  if (r == 0) return std::pow(1.0 + t, -e);
  const double singles = std::pow(1.0 + t, -alpha * e);
  if (r == 1) return singles;
  return singles * std::pow(alpha * t / (1.0 + t), r - 1) / (2.0 * std::exp(log_gamma(r)));
}

std::vector<double> drift_field(double alpha, std::span<const double> state) {
  require_alpha(alpha);
  if (state.empty()) throw DomainError("drift_field: empty state");
  const double x0 = state[0];
  if (!(x0 > 0.0)) throw DomainError("drift_field: singular at X_0 <= 0");
  const double c = alpha / (alpha - 1.0);
  const double down = std::pow(x0, alpha - 1.0);
  const double up = alpha / std::pow(x0, 2.0 - alpha);
  std::vector<double> d(state.size());
  d[0] = -std::pow(x0, alpha) / (alpha - 1.0);
  if (state.size() > 1) d[1] = -c * state[1] * down;
  if (state.size() > 2) d[2] = up * state[1] * state[1] / 2.0 - c * state[2] * down;
  for (std::size_t r = 3; r < state.size(); ++r) d[r] = up * state[r - 1] * state[1] - c * state[r] * down;
  return d;
}

DriftSolution integrate_drift(double alpha, int r_max, double horizon, double step) {
  require_alpha(alpha);
  if (r_max < 0) throw DomainError("integrate_drift: r_max must be >= 0");
  if (!(step > 0.0 && step <= 1e-2)) throw DomainError("integrate_drift: step must lie in (0, 1e-2]");
  if (!(horizon >= 0.0 && horizon <= 100.0)) throw DomainError("integrate_drift: horizon must lie in [0, 100]");
  const auto dim = static_cast<std::size_t>(r_max) + 1;
  std::vector<double> x(dim, 0.0);
  x[0] = 1.0;
  if (dim > 1) x[1] = 1.0;

  DriftSolution out;
  const auto record = [&](double t) {
    out.t.push_back(t);
    out.x.push_back(x);
    for (std::size_t r = 0; r < dim; ++r) {
      out.sup_deviation = std::max(out.sup_deviation, std::abs(x[r] - x_r(alpha, static_cast<int>(r), t)));
    }
  };
  record(0.0);

  const auto steps = static_cast<long>(std::ceil(horizon / step - 1e-9));
  std::vector<double> stage(dim);
  const auto axpy = [&](const std::vector<double>& k, double h) {
    for (std::size_t r = 0; r < dim; ++r) stage[r] = x[r] + h * k[r];
    return stage;
  };
  for (long i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * step;
    const double h = std::min(step, horizon - t);
    const auto k1 = drift_field(alpha, x);
    const auto k2 = drift_field(alpha, axpy(k1, h / 2.0));
    const auto k3 = drift_field(alpha, axpy(k2, h / 2.0));
    const auto k4 = drift_field(alpha, axpy(k3, h));
    for (std::size_t r = 0; r < dim; ++r) x[r] += h / 6.0 * (k1[r] + 2.0 * k2[r] + 2.0 * k3[r] + k4[r]);
    record(t + h);
  }
  return out;
}

double x_up_rate(double alpha, int r, double s) {
  require_alpha(alpha);
  if (r < 2) throw DomainError("x_up: r must be >= 2");
  require_time(s);
  const double a = alpha / (alpha - 1.0);
  const double log_const = (r - 1) * std::log(alpha) - std::log(2.0) - log_gamma(r - 1);
  const double log_s = r == 2 ? 0.0 : (r - 2) * std::log(s);
  if (r > 2 && s == 0.0) return 0.0;
  return std::exp(log_const + log_s - (r + a) * std::log1p(s));
}

double limit_constant(double alpha, int r) {
  require_alpha(alpha);
  if (r < 2) throw DomainError("limit_constant: r must be >= 2");
  if (alpha == 2.0) {
    // 2^(r-1) / (r+1)!
    return std::exp((r - 1) * std::log(2.0) - log_gamma(r + 2.0));
  }
  const double a = alpha / (alpha - 1.0);
  return std::exp((r - 1) * std::log(alpha) - std::log(2.0) + log_gamma(1.0 + a) - log_gamma(r + a));
}

double x_up(double alpha, int r, double t) {
  require_alpha(alpha);
  if (r < 2) throw DomainError("x_up: r must be >= 2");
  require_time(t);
  if (std::isinf(t)) return limit_constant(alpha, r);
  if (t == 0.0) return 0.0;
  const double a = alpha / (alpha - 1.0);
  const double log_const = (r - 1) * std::log(alpha) - std::log(2.0) - log_gamma(r - 1);
  // s = u / (1 - u) maps [0, t] to [0, t/(1+t)]; integrand u^(r-2) (1-u)^a.
  const auto f = [r, a](double u) { return std::pow(u, r - 2) * std::pow(1.0 - u, a); };
  return std::exp(log_const) * integrate(f, 0.0, t / (1.0 + t), 1e-12).value;
}

double limit_constant_by_quadrature(double alpha, int r) {
  return integrate([alpha, r](double s) { return x_up_rate(alpha, r, s); }, 0.0,
                   std::numeric_limits<double>::infinity(), 1e-12)
      .value;
}

}  // namespace lamcat
