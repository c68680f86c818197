#pragma once

#include <cstdint>
#include <limits>

namespace lamcat {

// Thread-safe log-Gamma for positive arguments.
double log_gamma(double x);

double log_beta(double a, double b);

// log C(n, k) for 0 <= k <= n.
double log_binomial(std::int64_t n, std::int64_t k);

/// Streaming log-sum-exp. Terms are accumulated relative to the running
/// maximum so that sums of values like exp(800) stay finite.
class LogSumAccumulator {
 public:
  void add(double log_term);

  // log of the accumulated sum; -inf when empty.
  double log_sum() const;
  double sum() const;

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double scaled_ = 0.0;
};

}  // namespace lamcat
