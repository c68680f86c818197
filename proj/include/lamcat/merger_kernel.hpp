#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "lamcat/measure.hpp"
#include "lamcat/rates.hpp"

namespace lamcat {

/// Event-rate source shared by the census and oracle engines.
///
/// total_rate(b) includes the measure scale. Merger sizes are drawn from the
/// unit-scale distribution P(k | b) = C(b,k) lambda_{b,k} / lambda_b, so
/// measures that differ only in scale produce bit-identical size draws.
///
/// Kingman always returns k = 2. Beta inverts the distribution lazily,
/// starting from P(2 | b) and stepping with the exact successive ratio
///   P(k+1 | b) / P(k | b) = (b-k)(k-alpha) / ((k+1)(b-k-1+alpha)),
/// which costs O(k) per draw instead of O(b) per table. Densities use cached
/// RateTables.
///
/// Immutable after construction and safe to share across threads.
class MergerKernel {
 public:
  explicit MergerKernel(LambdaMeasure measure, std::int64_t max_blocks = 0,
                        double tail_eps = kDefaultTailEps,
                        std::shared_ptr<RateTableCache> cache = nullptr);

  const LambdaMeasure& measure() const { return measure_; }

  double total_rate(std::int64_t b) const;

  // Inverse-CDF draw of the merger size for b blocks given u in (0, 1).
  std::int64_t sample_size(std::int64_t b, double u) const;

  double size_probability(std::int64_t b, std::int64_t k) const;

 private:
  double unit_log_total(std::int64_t b) const;
  double log_pair_probability(std::int64_t b) const;

  LambdaMeasure measure_;
  double tail_eps_;
  std::shared_ptr<RateTableCache> cache_;
  // Beta only, indexed by b for b <= max_blocks.
  std::vector<double> unit_log_total_;
  std::vector<double> log_pair_probability_;
};

}  // namespace lamcat
