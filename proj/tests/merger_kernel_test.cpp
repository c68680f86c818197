#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <vector>

#include "lamcat/errors.hpp"
#include "lamcat/merger_kernel.hpp"
#include "lamcat/random.hpp"

namespace lamcat {
namespace {

TEST(MergerKernel, KingmanRates) {
  const MergerKernel k(LambdaMeasure::kingman(3.0));
  EXPECT_DOUBLE_EQ(k.total_rate(10), 135.0);
  EXPECT_EQ(k.sample_size(10, 0.999), 2);
  EXPECT_DOUBLE_EQ(k.size_probability(10, 2), 1.0);
  EXPECT_DOUBLE_EQ(k.size_probability(10, 3), 0.0);
}

TEST(MergerKernel, BetaMatchesRateTable) {
  const auto m = LambdaMeasure::beta(1.5);
  for (std::int64_t max_blocks : {0, 500}) {
    const MergerKernel k(m, max_blocks);
    for (std::int64_t b : {2, 3, 10, 400}) {
      const auto table = build_rate_table(m, b, 0.0);
      EXPECT_NEAR(k.total_rate(b) / table.total_rate, 1.0, 1e-12);
      for (std::int64_t s = 2; s <= std::min<std::int64_t>(b, 12); ++s) {
        EXPECT_NEAR(k.size_probability(b, s), table.size_probability(s), 1e-12) << "b=" << b << " k=" << s;
      }
    }
  }
}

TEST(MergerKernel, PrecomputedAndOnDemandAgree) {
  const auto m = LambdaMeasure::beta(1.3);
  const MergerKernel cached(m, 1000);
  const MergerKernel lazy(m);
  for (int i = 1; i < 200; ++i) {
    const double u = (i - 0.5) / 200.0;
    EXPECT_EQ(cached.sample_size(800, u), lazy.sample_size(800, u));
  }
  EXPECT_DOUBLE_EQ(cached.total_rate(800), lazy.total_rate(800));
}

TEST(MergerKernel, InverseCdfBoundaries) {
  const MergerKernel k(LambdaMeasure::beta(1.5), 10);
  // P(2 | 3) = 0.9
  EXPECT_EQ(k.sample_size(3, 0.89), 2);
  EXPECT_EQ(k.sample_size(3, 0.91), 3);
  EXPECT_EQ(k.sample_size(2, 0.99), 2);
  EXPECT_EQ(k.sample_size(10, 1.0 - 1e-16), 10);
}

TEST(MergerKernel, SampledSizesPassChiSquare) {
  const std::vector<LambdaMeasure> measures{LambdaMeasure::beta(1.5),
                                            LambdaMeasure::builtin_density(1.5, "pure_power")};
  for (const auto& m : measures) {
    const MergerKernel kernel(m, 50);
    RandomStream rng(17, 0);
    const std::int64_t b = 50;
    const int draws = 200000;
    // Bins k = 2..9 and a pooled tail.
    std::vector<int> counts(9, 0);
    for (int i = 0; i < draws; ++i) {
      const auto k = kernel.sample_size(b, rng.uniform());
      ++counts[static_cast<std::size_t>(std::min<std::int64_t>(k, 10) - 2)];
    }
    double chi2 = 0.0;
    double pooled = 1.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      double p;
      if (i + 1 < counts.size()) {
        p = kernel.size_probability(b, static_cast<std::int64_t>(i) + 2);
        pooled -= p;
      } else {
        p = pooled;
      }
      const double e = p * draws;
      chi2 += (counts[i] - e) * (counts[i] - e) / e;
    }
    const boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
    EXPECT_LT(chi2, boost::math::quantile(dist, 0.999)) << m.spec();
  }
}

TEST(MergerKernel, SizeDrawsIgnoreScale) {
  const auto m = LambdaMeasure::builtin_density(1.4, "pure_power");
  const MergerKernel a(m);
  const MergerKernel b(m.with_scale(7.3));
  for (int i = 1; i < 50; ++i) {
    const double u = i / 50.0;
    EXPECT_EQ(a.sample_size(40, u), b.sample_size(40, u));
  }
  EXPECT_NEAR(b.total_rate(40) / a.total_rate(40), 7.3, 1e-12);
}

TEST(MergerKernel, TerminalState) {
  const MergerKernel k(LambdaMeasure::beta(1.5));
  EXPECT_THROW(k.total_rate(1), TerminalStateError);
  EXPECT_THROW(k.sample_size(1, 0.5), TerminalStateError);
}

}  // namespace
}  // namespace lamcat
