#include "lamcat/merger_kernel.hpp"

#include <cmath>
#include <utility>

#include "lamcat/errors.hpp"
#include "lamcat/special.hpp"

namespace lamcat {

MergerKernel::MergerKernel(LambdaMeasure measure, std::int64_t max_blocks, double tail_eps,
                           std::shared_ptr<RateTableCache> cache)
    : measure_(std::move(measure)), tail_eps_(tail_eps), cache_(std::move(cache)) {
  if (measure_.kind() == MeasureKind::density && !cache_) cache_ = std::make_shared<RateTableCache>();
  if (measure_.kind() == MeasureKind::beta && max_blocks >= 2) {
    std::vector<double> totals(static_cast<std::size_t>(max_blocks) + 1, 0.0);
    std::vector<double> pairs(totals.size(), 0.0);
    for (std::int64_t b = 2; b <= max_blocks; ++b) {
      const auto i = static_cast<std::size_t>(b);
      totals[i] = unit_log_total(b);
      pairs[i] = log_pair_probability(b);
    }
    unit_log_total_ = std::move(totals);
    log_pair_probability_ = std::move(pairs);
  }
}

double MergerKernel::unit_log_total(std::int64_t b) const {
  const auto i = static_cast<std::size_t>(b);
  if (i < unit_log_total_.size()) return unit_log_total_[i];
  const double a = measure_.alpha();
  const auto bd = static_cast<double>(b);
  return log_gamma(bd + a - 1.0) - std::log(a) - log_gamma(a) - log_gamma(bd - 1.0);
}

double MergerKernel::log_pair_probability(std::int64_t b) const {
  const auto i = static_cast<std::size_t>(b);
  if (i < log_pair_probability_.size()) return log_pair_probability_[i];
  const double a = measure_.alpha();
  const auto bd = static_cast<double>(b);
  const double log_lambda_b2 = log_beta(2.0 - a, bd - 2.0 + a) - log_beta(2.0 - a, a);
  return log_binomial(b, 2) + log_lambda_b2 - unit_log_total(b);
}

double MergerKernel::total_rate(std::int64_t b) const {
  if (b < 2) throw TerminalStateError("total_rate: fewer than two blocks");
  const auto bd = static_cast<double>(b);
  switch (measure_.kind()) {
    case MeasureKind::kingman:
      return measure_.scale() * (bd * (bd - 1.0) / 2.0);
    case MeasureKind::beta:
      return measure_.scale() * std::exp(unit_log_total(b));
    case MeasureKind::density:
      return measure_.scale() * cache_->get(measure_, b, tail_eps_)->total_rate;
  }
  throw ConsistencyError("total_rate: unhandled measure kind");
}

std::int64_t MergerKernel::sample_size(std::int64_t b, double u) const {
  if (b < 2) throw TerminalStateError("sample_size: fewer than two blocks");
  if (b == 2) return 2;
  switch (measure_.kind()) {
    case MeasureKind::kingman:
      return 2;
    case MeasureKind::beta: {
      const double a = measure_.alpha();
      const auto bd = static_cast<double>(b);
      double p = std::exp(log_pair_probability(b));
      double cumulative = p;
      std::int64_t k = 2;
      while (u > cumulative && k < b) {
        const auto kd = static_cast<double>(k);
        p *= (bd - kd) * (kd - a) / ((kd + 1.0) * (bd - kd - 1.0 + a));
        cumulative += p;
        ++k;
      }
      return k;
    }
    case MeasureKind::density: {
      const auto table = cache_->get(measure_, b, tail_eps_);
      // Condition on the retained sizes.
      const double target = u * (1.0 - table->tail_mass);
      double cumulative = 0.0;
      for (std::int64_t k = 2; k <= table->k_max; ++k) {
        cumulative += table->size_probability(k);
        if (target <= cumulative) return k;
      }
      return table->k_max;
    }
  }
  throw ConsistencyError("sample_size: unhandled measure kind");
}

double MergerKernel::size_probability(std::int64_t b, std::int64_t k) const {
  if (b < 2) throw TerminalStateError("size_probability: fewer than two blocks");
  if (k < 2 || k > b) return 0.0;
  switch (measure_.kind()) {
    case MeasureKind::kingman:
      return k == 2 ? 1.0 : 0.0;
    case MeasureKind::beta: {
      const double a = measure_.alpha();
      const auto bd = static_cast<double>(b);
      const auto kd = static_cast<double>(k);
      const double log_rate = log_binomial(b, k) + log_beta(kd - a, bd - kd + a) - log_beta(2.0 - a, a);
      return std::exp(log_rate - unit_log_total(b));
    }
    case MeasureKind::density: {
      const auto table = cache_->get(measure_, b, tail_eps_);
      return table->size_probability(k) / (1.0 - table->tail_mass);
    }
  }
  throw ConsistencyError("size_probability: unhandled measure kind");
}

}  // namespace lamcat
