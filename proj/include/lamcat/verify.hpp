#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lamcat/measure.hpp"

namespace lamcat {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::int64_t cases = 0;
  std::int64_t failures = 0;
  double worst = 0.0;  // largest observed error, where meaningful
  std::string detail;
};

/// Census merge rule against the literal caterpillar definition.
///
/// For every n in [2, max_n] and run in [0, runs), the oracle history drawn
/// from stream (seed, run) is checked three ways: per-block census flags
/// equal definition flags; replaying the history through apply_merger gives
/// the literal totals; and run_totals on the same stream reproduces the
/// event count and final coalescent time bit for bit.
CheckResult check_engine_equivalence(const LambdaMeasure& measure, int max_n, int runs,
                                     std::uint64_t seed);

/// gamma_sum_closed_form against term-by-term sums, both orders, b in [2, b_max].
CheckResult check_gamma_identities(const std::vector<double>& alphas, std::int64_t b_max, double rel_tol);

/// lambda_{b,k} = lambda_{b+1,k} + lambda_{b+1,k+1} for 2 <= k <= b <= b_max.
CheckResult check_pascal_recursion(const LambdaMeasure& measure, std::int64_t b_max, double rel_tol);

/// Bit-identical caterpillar totals for `measure` and measure.with_scale(factor)
/// over `runs` seeds, with the final coalescent time shrinking by `factor`.
CheckResult check_time_change(const LambdaMeasure& measure, double factor, std::int64_t n, int r_max,
                              int runs, std::uint64_t seed);

struct VerifyOptions {
  int small_n = 12;
  int runs = 10000;
  std::uint64_t seed = 0;
  std::int64_t gamma_b_max = 1000;
  std::int64_t pascal_b_max = 200;
  double gamma_tol = 1e-10;
  double pascal_tol = 1e-9;
};

/// Full property suite: engine equivalence for Kingman and Beta(alpha = 1.5),
/// gamma identities, Pascal recursion on all three measure kinds, and
/// time-change invariance.
std::vector<CheckResult> run_verify_suite(const VerifyOptions& options);

}  // namespace lamcat
