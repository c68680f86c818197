#include "lamcat/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lamcat/census.hpp"
#include "lamcat/errors.hpp"
#include "lamcat/merger_kernel.hpp"
#include "lamcat/oracle.hpp"
#include "lamcat/rates.hpp"

namespace lamcat {

namespace {

double relative_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

void note_failure(CheckResult& out, const std::string& what) {
  ++out.failures;
  if (out.detail.empty()) out.detail = "first failure: " + what;
}

}  // namespace

CheckResult check_engine_equivalence(const LambdaMeasure& measure, int max_n, int runs, std::uint64_t seed) {
  if (max_n < 2 || max_n > kDefaultOracleCap) throw DomainError("check_engine_equivalence: max_n out of range");
  if (runs < 1) throw DomainError("check_engine_equivalence: runs must be >= 1");
  CheckResult out;
  out.name = "engine_equivalence[" + measure.spec() + "]";
  const MergerKernel kernel(measure, max_n);
  for (int n = 2; n <= max_n; ++n) {
    for (int run = 0; run < runs; ++run) {
      ++out.cases;
      const auto stream = static_cast<std::uint64_t>(run);
      RandomStream rng(seed, stream);
      const auto history = run_oracle(kernel, n, rng);
      const auto label = "n=" + std::to_string(n) + " run=" + std::to_string(run);
      if (definition_flags(history) != census_rule_flags(history)) {
        note_failure(out, label + " per-block flags differ");
        continue;
      }
      const auto census = replay_census(history, n);
      bool totals_match = true;
      for (int r = 2; r <= n; ++r) {
        if (census.cumulative[static_cast<std::size_t>(r)] != caterpillars_from_history(history, r)) {
          totals_match = false;
        }
      }
      if (!totals_match) {
        note_failure(out, label + " replayed totals differ");
        continue;
      }
      RandomStream census_rng(seed, stream);
      const auto totals = run_totals(kernel, n, n, census_rng);
      if (totals.events != static_cast<std::int64_t>(history.events.size()) ||
          totals.final_time != history.events.back().time) {
        note_failure(out, label + " jump chain differs from run_totals");
      }
    }
  }
  out.passed = out.failures == 0;
  return out;
}

CheckResult check_gamma_identities(const std::vector<double>& alphas, std::int64_t b_max, double rel_tol) {
  CheckResult out;
  out.name = "gamma_identities";
  for (const double alpha : alphas) {
    for (int order = 0; order <= 1; ++order) {
      double partial = 0.0;
      for (std::int64_t b = 2; b <= b_max; ++b) {
        const auto bd = static_cast<double>(b);
        const double term = std::exp(std::lgamma(bd - alpha) - std::lgamma(bd + 1.0));
        partial += order == 0 ? term : bd * term;
        const double closed = gamma_sum_closed_form(alpha, b, order);
        const double err = relative_error(closed, partial);
        out.worst = std::max(out.worst, err);
        ++out.cases;
        if (!(err <= rel_tol)) {
          std::ostringstream s;
          s << "alpha=" << alpha << " b=" << b << " order=" << order << " rel_err=" << err;
          note_failure(out, s.str());
        }
      }
    }
  }
  out.passed = out.failures == 0;
  return out;
}

CheckResult check_pascal_recursion(const LambdaMeasure& measure, std::int64_t b_max, double rel_tol) {
  CheckResult out;
  out.name = "pascal_recursion[" + measure.spec() + "]";
  std::vector<double> next{lambda_bk(measure, 2, 2)};
  for (std::int64_t b = 2; b <= b_max; ++b) {
    // row[k - 2] = lambda_{b+1,k}; `next` holds lambda_{b,k}.
    std::vector<double> row;
    row.reserve(static_cast<std::size_t>(b));
    for (std::int64_t k = 2; k <= b + 1; ++k) row.push_back(lambda_bk(measure, b + 1, k));
    for (std::int64_t k = 2; k <= b; ++k) {
      const auto i = static_cast<std::size_t>(k - 2);
      const double err = relative_error(next[i], row[i] + row[i + 1]);
      out.worst = std::max(out.worst, err);
      ++out.cases;
      if (!(err <= rel_tol)) {
        std::ostringstream s;
        s << "b=" << b << " k=" << k << " rel_err=" << err;
        note_failure(out, s.str());
      }
    }
    next = std::move(row);
  }
  out.passed = out.failures == 0;
  return out;
}

CheckResult check_time_change(const LambdaMeasure& measure, double factor, std::int64_t n, int r_max, int runs,
                              std::uint64_t seed) {
  CheckResult out;
  out.name = "time_change[" + measure.spec() + " x" + std::to_string(factor) + "]";
  const auto scaled = measure.with_scale(measure.scale() * factor);
  const MergerKernel base_kernel(measure, n);
  const MergerKernel scaled_kernel(scaled, n);
  for (int run = 0; run < runs; ++run) {
    ++out.cases;
    RandomStream a(seed, static_cast<std::uint64_t>(run));
    RandomStream b(seed, static_cast<std::uint64_t>(run));
    const auto base = run_totals(base_kernel, n, r_max, a);
    const auto other = run_totals(scaled_kernel, n, r_max, b);
    const double err = relative_error(base.final_time, other.final_time * factor);
    out.worst = std::max(out.worst, err);
    if (base.xi != other.xi || base.events != other.events || !(err <= 1e-12)) {
      note_failure(out, "run=" + std::to_string(run));
    }
  }
  out.passed = out.failures == 0;
  return out;
}

std::vector<CheckResult> run_verify_suite(const VerifyOptions& options) {
  std::vector<CheckResult> results;
  results.push_back(
      check_engine_equivalence(LambdaMeasure::kingman(), options.small_n, options.runs, options.seed));
  results.push_back(
      check_engine_equivalence(LambdaMeasure::beta(1.5), options.small_n, options.runs, options.seed));
  results.push_back(
      check_gamma_identities({1.1, 1.25, 1.5, 1.75, 1.9}, options.gamma_b_max, options.gamma_tol));
  for (const auto& measure : {LambdaMeasure::kingman(), LambdaMeasure::beta(1.5),
                              LambdaMeasure::builtin_density(1.5, "pure_power")}) {
    results.push_back(check_pascal_recursion(measure, options.pascal_b_max, options.pascal_tol));
  }
  results.push_back(check_time_change(LambdaMeasure::beta(1.5), 7.3, 1000, 8, 20, options.seed));
  return results;
}

}  // namespace lamcat
