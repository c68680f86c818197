#include "lamcat/rates.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "lamcat/errors.hpp"
#include "lamcat/special.hpp"

namespace lamcat {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Relative accuracy claimed for the closed-form certificates.
constexpr double kClosedFormRelErr = 1e-13;

void require_bk(std::int64_t b, std::int64_t k) {
  if (b < 2) throw DomainError("lambda_bk: b must be >= 2, got " + std::to_string(b));
  if (k < 2 || k > b) {
    throw DomainError("lambda_bk: k must lie in [2, b], got k=" + std::to_string(k) +
                      " b=" + std::to_string(b));
  }
}

void require_tail_eps(double tail_eps) {
  if (!(tail_eps >= 0.0 && tail_eps <= 1e-6)) throw DomainError("tail_eps must lie in [0, 1e-6]");
}

double certificate_error(const LambdaMeasure& measure, double exact) {
  const double rel = measure.kind() == MeasureKind::density ? kDefaultQuadratureTol : kClosedFormRelErr;
  return rel * exact;
}

struct LogSeries {
  std::vector<double> log_block_rates;
  LogSumAccumulator total;
  LogSumAccumulator first;
  LogSumAccumulator second;
  std::int64_t k_max = 0;
};

// Sums C(b,k) lambda_{b,k} weighted by w(k) in increasing k and stops once
// certified_total - partial falls under tail_eps * certified_total.
template <class Weight>
LogSeries sum_block_rates(const LambdaMeasure& measure, std::int64_t b, double tail_eps,
                          double certified_total, Weight&& log_weight) {
  LogSeries out;
  LogSumAccumulator weighted;
  const double threshold = tail_eps * certified_total - certificate_error(measure, certified_total);
  for (std::int64_t k = 2; k <= b; ++k) {
    const double lbr = log_binomial(b, k) + log_lambda_bk(measure, b, k);
    out.log_block_rates.push_back(lbr);
    out.total.add(lbr);
    const auto kd = static_cast<double>(k);
    out.first.add(std::log(kd) + lbr);
    out.second.add(std::log(kd * (kd - 1.0)) + lbr);
    weighted.add(log_weight(kd) + lbr);
    out.k_max = k;
    if (threshold > 0.0 && k < b && certified_total - weighted.sum() <= threshold) break;
  }
  return out;
}

}  // namespace

double log_lambda_bk(const LambdaMeasure& measure, std::int64_t b, std::int64_t k, double rel_tol) {
  require_bk(b, k);
  const double log_scale = std::log(measure.scale());
  switch (measure.kind()) {
    case MeasureKind::kingman:
      return k == 2 ? log_scale : kNegInf;
    case MeasureKind::beta: {
      const double a = measure.alpha();
      const auto kd = static_cast<double>(k);
      const auto bd = static_cast<double>(b);
      return log_scale + log_beta(kd - a, bd - kd + a) - log_beta(2.0 - a, a);
    }
    case MeasureKind::density: {
      const auto kd = static_cast<double>(k);
      const auto bd = static_cast<double>(b);
      const double value = integrate_unit_density(
          measure,
          [kd, bd](double p) {
            return std::exp((kd - 2.0) * std::log(p) + (bd - kd) * std::log1p(-p));
          },
          rel_tol);
      return value > 0.0 ? log_scale + std::log(value) : kNegInf;
    }
  }
  throw ConsistencyError("log_lambda_bk: unhandled measure kind");
}

double lambda_bk(const LambdaMeasure& measure, std::int64_t b, std::int64_t k, double rel_tol) {
  return std::exp(log_lambda_bk(measure, b, k, rel_tol));
}

double exact_total_rate(const LambdaMeasure& measure, std::int64_t b) {
  if (b < 2) throw DomainError("total rate: b must be >= 2");
  const auto bd = static_cast<double>(b);
  switch (measure.kind()) {
    case MeasureKind::kingman:
      return measure.scale() * bd * (bd - 1.0) / 2.0;
    case MeasureKind::beta: {
      // lambda_b = Gamma(b + alpha - 1) / (alpha Gamma(alpha) Gamma(b - 1))
      const double a = measure.alpha();
      return measure.scale() *
             std::exp(log_gamma(bd + a - 1.0) - std::log(a) - log_gamma(a) - log_gamma(bd - 1.0));
    }
    case MeasureKind::density:
      return measure.scale() * integrate_unit_density(measure, [bd](double p) {
               return boost::math::ibeta(2.0, bd - 1.0, p) / (p * p);
             });
  }
  throw ConsistencyError("exact_total_rate: unhandled measure kind");
}

double exact_first_moment(const LambdaMeasure& measure, std::int64_t b) {
  if (b < 2) throw DomainError("first moment: b must be >= 2");
  const auto bd = static_cast<double>(b);
  switch (measure.kind()) {
    case MeasureKind::kingman:
      return measure.scale() * bd * (bd - 1.0);
    case MeasureKind::beta: {
      // b (Gamma(b-1+alpha) / (Gamma(alpha) Gamma(b)) - 1) / (alpha - 1)
      const double a = measure.alpha();
      return measure.scale() * bd *
             std::expm1(log_gamma(bd - 1.0 + a) - log_gamma(a) - log_gamma(bd)) / (a - 1.0);
    }
    case MeasureKind::density:
      return measure.scale() * bd * integrate_unit_density(measure, [bd](double p) {
               return -std::expm1((bd - 1.0) * std::log1p(-p)) / p;
             });
  }
  throw ConsistencyError("exact_first_moment: unhandled measure kind");
}

double exact_second_factorial_moment(const LambdaMeasure& measure, std::int64_t b) {
  if (b < 2) throw DomainError("second moment: b must be >= 2");
  const auto bd = static_cast<double>(b);
  return bd * (bd - 1.0) * measure.total_mass();
}

RateTable build_rate_table(const LambdaMeasure& measure, std::int64_t b, double tail_eps) {
  if (b < 2) throw DomainError("build_rate_table: b must be >= 2");
  require_tail_eps(tail_eps);
  RateTable table;
  table.b = b;
  if (measure.kind() == MeasureKind::kingman) {
    const double lbr = log_binomial(b, 2) + std::log(measure.scale());
    table.k_max = 2;
    table.log_block_rates = {lbr};
    table.size_probabilities = {1.0};
    table.total_rate = std::exp(lbr);
    table.first_moment = 2.0 * table.total_rate;
    table.second_factorial_moment = 2.0 * table.total_rate;
    return table;
  }

  const double certified = exact_total_rate(measure, b);
  auto series = sum_block_rates(measure, b, tail_eps, certified, [](double) { return 0.0; });
  table.k_max = series.k_max;
  table.log_block_rates = std::move(series.log_block_rates);
  const double retained = series.total.sum();
  if (table.k_max == b) {
    table.total_rate = retained;
    table.tail_mass = 0.0;
  } else {
    table.total_rate = certified;
    table.tail_mass = std::max(0.0, 1.0 - retained / certified);
  }
  const double log_total = std::log(table.total_rate);
  table.size_probabilities.reserve(table.log_block_rates.size());
  for (double lbr : table.log_block_rates) table.size_probabilities.push_back(std::exp(lbr - log_total));
  table.first_moment = series.first.sum();
  table.second_factorial_moment = series.second.sum();
  return table;
}

double rate_moment(const LambdaMeasure& measure, std::int64_t b, int order, double tail_eps) {
  if (order != 1 && order != 2) throw DomainError("rate_moment: order must be 1 or 2");
  if (b < 2) throw DomainError("rate_moment: b must be >= 2");
  require_tail_eps(tail_eps);
  if (measure.kind() == MeasureKind::kingman) {
    const auto bd = static_cast<double>(b);
    return measure.scale() * bd * (bd - 1.0);
  }
  if (order == 1) {
    const auto series = sum_block_rates(measure, b, tail_eps, exact_first_moment(measure, b),
                                        [](double k) { return std::log(k); });
    return series.first.sum();
  }
  const auto series = sum_block_rates(measure, b, tail_eps, exact_second_factorial_moment(measure, b),
                                      [](double k) { return std::log(k * (k - 1.0)); });
  return series.second.sum();
}

double gamma_sum_closed_form(double alpha, std::int64_t b, int order) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("gamma_sum_closed_form: alpha must lie in (1, 2)");
  if (b < 2) throw DomainError("gamma_sum_closed_form: b must be >= 2");
  const auto bd = static_cast<double>(b);
  const double head = std::exp(log_gamma(2.0 - alpha));
  if (order == 0) {
    return head / alpha - std::exp(log_gamma(bd + 1.0 - alpha) - log_gamma(bd + 1.0)) / alpha;
  }
  if (order == 1) {
    return head / (alpha - 1.0) -
           std::exp(log_gamma(bd + 1.0 - alpha) - log_gamma(bd + 2.0)) * bd * (bd + 1.0) / (alpha - 1.0);
  }
  throw DomainError("gamma_sum_closed_form: order must be 0 or 1");
}

double gamma_sum_terms(double alpha, std::int64_t b, int order) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("gamma_sum_terms: alpha must lie in (1, 2)");
  if (order != 0 && order != 1) throw DomainError("gamma_sum_terms: order must be 0 or 1");
  double sum = 0.0;
  for (std::int64_t k = 2; k <= b; ++k) {
    const auto kd = static_cast<double>(k);
    const double term = std::exp(log_gamma(kd - alpha) - log_gamma(kd + 1.0));
    sum += order == 0 ? term : kd * term;
  }
  return sum;
}

std::shared_ptr<const RateTable> RateTableCache::get(const LambdaMeasure& measure, std::int64_t b,
                                                     double tail_eps) {
  const Key key{measure.shape_id(), b, tail_eps};
  {
    std::shared_lock lock(mutex_);
    if (auto it = tables_.find(key); it != tables_.end()) return it->second;
  }
  auto built = std::make_shared<const RateTable>(build_rate_table(measure.with_scale(1.0), b, tail_eps));
  std::unique_lock lock(mutex_);
  ++builds_;
  auto [it, inserted] = tables_.emplace(key, std::move(built));
  auto result = it->second;
  if (inserted) {
    insertion_order_.push_back(key);
    while (tables_.size() > capacity_ && !insertion_order_.empty()) {
      tables_.erase(insertion_order_.front());
      insertion_order_.pop_front();
    }
  }
  return result;
}

std::size_t RateTableCache::size() const {
  std::shared_lock lock(mutex_);
  return tables_.size();
}

std::size_t RateTableCache::builds() const {
  std::shared_lock lock(mutex_);
  return builds_;
}

}  // namespace lamcat
