#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <list>
#include <map>
#include <tuple>
#include <vector>

#include "lamcat/measure.hpp"

namespace lamcat {

inline constexpr double kDefaultTailEps = 1e-12;
inline constexpr double kDefaultQuadratureTol = 1e-10;

/// lambda_{b,k}: rate at which a fixed set of k blocks merges when b blocks
/// are present. Kingman is 1{k=2} * scale; Beta uses the closed form
/// scale * B(k-alpha, b-k+alpha) / B(2-alpha, alpha); densities use quadrature.
double lambda_bk(const LambdaMeasure& measure, std::int64_t b, std::int64_t k,
                 double rel_tol = kDefaultQuadratureTol);

// log lambda_{b,k}; -inf where the rate vanishes.
double log_lambda_bk(const LambdaMeasure& measure, std::int64_t b, std::int64_t k,
                     double rel_tol = kDefaultQuadratureTol);

/// Per-b merger rates.
///
/// log_block_rates[k - 2] = log(C(b,k) lambda_{b,k}) for k = 2..k_max, where
/// k_max <= b is the truncation point. size_probabilities[k - 2] is the
/// probability that the next merger involves k blocks; the retained
/// probabilities sum to 1 - tail_mass. Moments cover the retained terms.
struct RateTable {
  std::int64_t b = 0;
  std::int64_t k_max = 0;
  std::vector<double> log_block_rates;
  std::vector<double> size_probabilities;
  double total_rate = 0.0;
  double tail_mass = 0.0;
  double first_moment = 0.0;
  double second_factorial_moment = 0.0;

  double size_probability(std::int64_t k) const {
    return (k >= 2 && k <= k_max) ? size_probabilities[static_cast<std::size_t>(k - 2)] : 0.0;
  }
};

/// Builds the table for b blocks. Block rates are summed in increasing k in
/// log space; summation stops once the rates not yet added are certified to
/// be below tail_eps of the exact total rate (tail_eps in [0, 1e-6]).
RateTable build_rate_table(const LambdaMeasure& measure, std::int64_t b,
                           double tail_eps = kDefaultTailEps);

// Sum over k of k * C(b,k) lambda_{b,k} (order 1) or k(k-1) * C(b,k) lambda_{b,k}
// (order 2), by log-space summation with the same truncation policy.
double rate_moment(const LambdaMeasure& measure, std::int64_t b, int order,
                   double tail_eps = kDefaultTailEps);

/// Independent routes to the per-b totals, used as tail certificates and as
/// test oracles for the summations above.
///   total rate:    int P(Bin(b,p) >= 2) p^-2 Lambda(dp)
///   first moment:  b int (1 - (1-p)^(b-1)) p^-1 Lambda(dp)
///   second fact.:  b (b-1) Lambda[0,1]   (exact for every measure)
/// Kingman and Beta use closed forms; densities use one quadrature each.
double exact_total_rate(const LambdaMeasure& measure, std::int64_t b);
double exact_first_moment(const LambdaMeasure& measure, std::int64_t b);
double exact_second_factorial_moment(const LambdaMeasure& measure, std::int64_t b);

/// Closed forms of the Gamma-ratio sums
///   order 0: sum_{k=2}^b Gamma(k-alpha)/Gamma(k+1)
///            = Gamma(2-alpha)/alpha - Gamma(b+1-alpha)/(alpha Gamma(b+1))
///   order 1: sum_{k=2}^b k Gamma(k-alpha)/Gamma(k+1)
///            = Gamma(2-alpha)/(alpha-1) - Gamma(b+1-alpha) b (b+1)/((alpha-1) Gamma(b+2))
/// alpha must lie strictly inside (1, 2).
double gamma_sum_closed_form(double alpha, std::int64_t b, int order);

// The same sums evaluated term by term through log-Gamma.
double gamma_sum_terms(double alpha, std::int64_t b, int order);

/// Bounded, thread-safe cache of unit-scale rate tables keyed by
/// (measure shape, b, tail_eps). Concurrent inserts of the same key are
/// idempotent: the first stored table wins and every caller sees it.
class RateTableCache {
 public:
  explicit RateTableCache(std::size_t capacity = 4096) : capacity_(capacity) {}

  std::shared_ptr<const RateTable> get(const LambdaMeasure& measure, std::int64_t b,
                                       double tail_eps = kDefaultTailEps);

  std::size_t size() const;
  std::size_t builds() const;

 private:
  using Key = std::tuple<std::uint64_t, std::int64_t, double>;

  std::size_t capacity_;
  mutable std::shared_mutex mutex_;
  std::map<Key, std::shared_ptr<const RateTable>> tables_;
  std::list<Key> insertion_order_;
  std::size_t builds_ = 0;
};

}  // namespace lamcat
