#include "lamcat/special.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "lamcat/errors.hpp"

namespace lamcat {

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive");
  return boost::math::lgamma(x);
}

double log_beta(double a, double b) { return log_gamma(a) + log_gamma(b) - log_gamma(a + b); }

double log_binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) throw DomainError("log_binomial: k outside [0, n]");
  if (k == 0 || k == n) return 0.0;
  const auto nd = static_cast<double>(n);
  const auto kd = static_cast<double>(k);
  return log_gamma(nd + 1.0) - log_gamma(kd + 1.0) - log_gamma(nd - kd + 1.0);
}

void LogSumAccumulator::add(double log_term) {
  if (log_term == -std::numeric_limits<double>::infinity()) return;
  if (log_term > max_) {
    scaled_ = scaled_ * std::exp(max_ - log_term) + 1.0;
    max_ = log_term;
  } else {
    scaled_ += std::exp(log_term - max_);
  }
}

double LogSumAccumulator::log_sum() const {
  if (scaled_ == 0.0) return -std::numeric_limits<double>::infinity();
  return max_ + std::log(scaled_);
}

double LogSumAccumulator::sum() const { return std::exp(log_sum()); }

}  // namespace lamcat
