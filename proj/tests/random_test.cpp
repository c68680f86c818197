#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <vector>

#include "lamcat/random.hpp"

namespace lamcat {
namespace {

TEST(RandomStream, DeterministicPerSeedAndStream) {
  RandomStream a(42, 7);
  RandomStream b(42, 7);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(RandomStream, StreamsDiffer) {
  RandomStream a(42, 0);
  RandomStream b(42, 1);
  RandomStream c(43, 0);
  const auto x = a.next();
  EXPECT_NE(x, b.next());
  EXPECT_NE(x, c.next());
}

TEST(RandomStream, FrozenFirstOutputs) {
  // Fixed by the C++ standard's definitions of mt19937_64 and seed_seq.
  RandomStream s(0, 0);
  const double u = s.uniform();
  RandomStream t(0, 0);
  const auto raw = t.next();
  EXPECT_DOUBLE_EQ(u, (static_cast<double>(raw >> 11) + 0.5) * 0x1.0p-53);
}

TEST(RandomStream, UniformIsInOpenUnitInterval) {
  RandomStream s(1, 2);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000.0, 0.5, 0.005);
}

TEST(RandomStream, ExponentialMean) {
  RandomStream s(3, 0);
  double sum = 0.0;
  const int draws = 200000;
  for (int i = 0; i < draws; ++i) sum += s.exponential(4.0);
  // sd of the mean is 0.25 / sqrt(draws) ~ 5.6e-4.
  EXPECT_NEAR(sum / draws, 0.25, 0.003);
}

TEST(RandomStream, BelowIsUniformChiSquare) {
  RandomStream s(9, 9);
  const int m = 37;
  const int draws = 370000;
  std::vector<int> counts(m, 0);
  for (int i = 0; i < draws; ++i) {
    const auto v = s.below(m);
    ASSERT_LT(v, static_cast<std::uint64_t>(m));
    ++counts[v];
  }
  const double expected = static_cast<double>(draws) / m;
  double chi2 = 0.0;
  for (const int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  const boost::math::chi_squared dist(m - 1);
  EXPECT_LT(chi2, boost::math::quantile(dist, 0.999));
}

TEST(RandomStream, BelowOneIsZero) {
  RandomStream s(5, 5);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(s.below(1), 0u);
}

}  // namespace
}  // namespace lamcat
