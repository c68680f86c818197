#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "lamcat/errors.hpp"
#include "lamcat/theory.hpp"

namespace lamcat {
namespace {

const std::vector<double> kTimes{0.25, 0.5, 1.0, 2.0, 4.0};

// Reference tables evaluated independently in exact rational arithmetic.
TEST(XR, FrozenTableAlphaOnePointFive) {
  const std::vector<std::vector<double>> expected{
      {0.64, 4.0 / 9.0, 0.25, 1.0 / 9.0, 0.04},
      {0.512, 8.0 / 27.0, 0.125, 1.0 / 27.0, 0.008},
      {0.0768, 2.0 / 27.0, 0.046875, 1.0 / 54.0, 0.0048},
      {0.01152, 1.0 / 54.0, 0.017578125, 1.0 / 108.0, 0.00288},
  };
  for (int r = 0; r <= 3; ++r) {
    for (std::size_t i = 0; i < kTimes.size(); ++i) {
      EXPECT_NEAR(x_r(1.5, r, kTimes[i]), expected[r][i], 1e-14) << "r=" << r << " t=" << kTimes[i];
    }
  }
}

TEST(XR, FrozenTableKingman) {
  const std::vector<std::vector<double>> expected{
      {0.8, 2.0 / 3.0, 0.5, 1.0 / 3.0, 0.2},
      {0.64, 4.0 / 9.0, 0.25, 1.0 / 9.0, 0.04},
      {0.128, 4.0 / 27.0, 0.125, 2.0 / 27.0, 0.032},
      {0.0256, 4.0 / 81.0, 0.0625, 4.0 / 81.0, 0.0256},
  };
  for (int r = 0; r <= 3; ++r) {
    for (std::size_t i = 0; i < kTimes.size(); ++i) {
      EXPECT_NEAR(x_r(2.0, r, kTimes[i]), expected[r][i], 1e-14) << "r=" << r << " t=" << kTimes[i];
    }
  }
}

TEST(XR, InitialConditionAndDecay) {
  for (const double a : {1.25, 1.5, 2.0}) {
    EXPECT_DOUBLE_EQ(x_r(a, 0, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(x_r(a, 1, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(x_r(a, 2, 0.0), 0.0);
    EXPECT_LT(x_r(a, 2, 1e6), 1e-6);
  }
}

TEST(XR, CherryPeakForKingman) {
  // d/dt of t/(1+t)^3 vanishes at t = 1/2.
  EXPECT_GT(x_r(2.0, 2, 0.5), x_r(2.0, 2, 0.49));
  EXPECT_GT(x_r(2.0, 2, 0.5), x_r(2.0, 2, 0.51));
}

TEST(XR, RejectsBadArguments) {
  EXPECT_THROW(x_r(1.0, 0, 1.0), DomainError);
  EXPECT_THROW(x_r(2.5, 0, 1.0), DomainError);
  EXPECT_THROW(x_r(1.5, -1, 1.0), DomainError);
  EXPECT_THROW(x_r(1.5, 0, -0.1), DomainError);
}

TEST(DriftField, KingmanFrozenValue) {
  const std::vector<double> state{1.0, 1.0, 0.0};
  const auto d = drift_field(2.0, state);
  ASSERT_EQ(d.size(), 3u);
  EXPECT_DOUBLE_EQ(d[0], -1.0);
  EXPECT_DOUBLE_EQ(d[1], -2.0);
  EXPECT_DOUBLE_EQ(d[2], 1.0);
}

TEST(DriftField, ClosedFormIsAFixedTrajectory) {
  // Finite-difference derivative of x_r matches the drift evaluated on x_r.
  for (const double a : {1.25, 1.5, 1.75, 2.0}) {
    for (const double t : {0.1, 0.7, 3.0}) {
      std::vector<double> state;
      for (int r = 0; r <= 5; ++r) state.push_back(x_r(a, r, t));
      const auto d = drift_field(a, state);
      const double h = 1e-5;
      for (int r = 0; r <= 5; ++r) {
        const double fd = (x_r(a, r, t + h) - x_r(a, r, t - h)) / (2.0 * h);
        EXPECT_NEAR(d[static_cast<std::size_t>(r)], fd, 1e-7) << "alpha=" << a << " t=" << t << " r=" << r;
      }
    }
  }
}

TEST(IntegrateDrift, MatchesClosedForm) {
  for (const double a : {1.25, 1.5, 1.75, 2.0}) {
    const auto sol = integrate_drift(a, 5, 5.0, 1e-3);
    EXPECT_LT(sol.sup_deviation, 1e-9) << "alpha=" << a;
    EXPECT_NEAR(sol.t.back(), 5.0, 1e-12);
  }
}

TEST(IntegrateDrift, RejectsBadStep) {
  EXPECT_THROW(integrate_drift(1.5, 3, 1.0, 0.0), DomainError);
  EXPECT_THROW(integrate_drift(1.5, 1, 1.0, 0.1), DomainError);
}

TEST(LimitConstant, FrozenValues) {
  EXPECT_NEAR(limit_constant(2.0, 2), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(limit_constant(2.0, 3), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(limit_constant(2.0, 4), 1.0 / 15.0, 1e-15);
  EXPECT_NEAR(limit_constant(1.5, 2), 0.1875, 1e-14);
  EXPECT_NEAR(limit_constant(1.5, 3), 0.05625, 1e-14);
  EXPECT_NEAR(limit_constant(1.5, 4), 0.0140625, 1e-14);
  EXPECT_NEAR(limit_constant(1.25, 2), 0.10416666666666667, 1e-14);
  EXPECT_NEAR(limit_constant(1.25, 3), 0.01860119047619048, 1e-14);
  EXPECT_NEAR(limit_constant(1.25, 4), 0.00290643601190476, 1e-14);
  EXPECT_NEAR(limit_constant(1.75, 2), 0.2625, 1e-14);
  EXPECT_NEAR(limit_constant(1.75, 3), 0.10600961538461538, 1e-14);
  EXPECT_NEAR(limit_constant(1.75, 4), 0.03478440504807692, 1e-14);
}

TEST(LimitConstant, AgreesWithQuadrature) {
  for (const double a : {1.1, 1.25, 1.5, 1.75, 1.9, 2.0}) {
    for (int r = 2; r <= 6; ++r) {
      EXPECT_NEAR(limit_constant(a, r), limit_constant_by_quadrature(a, r), 1e-10) << a << " " << r;
    }
  }
}

TEST(LimitConstant, ContinuousAtKingman) {
  for (int r = 2; r <= 5; ++r) EXPECT_NEAR(limit_constant(2.0 - 1e-7, r), limit_constant(2.0, r), 1e-6);
}

TEST(XUp, FrozenValues) {
  EXPECT_NEAR(x_up(1.5, 2, 1.0), 0.17578125, 1e-13);
  EXPECT_NEAR(x_up(1.5, 2, 0.25), 0.1107, 1e-13);
  EXPECT_NEAR(x_up(1.5, 2, 1e4), 0.18749999999999998, 1e-13);
  EXPECT_DOUBLE_EQ(x_up(1.5, 3, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(x_up(1.5, 3, std::numeric_limits<double>::infinity()), limit_constant(1.5, 3));
}

TEST(XUp, MonotoneAndDominatesCurrentCount) {
  for (const double a : {1.3, 2.0}) {
    double prev = 0.0;
    for (const double t : {0.1, 0.5, 1.0, 2.0, 10.0}) {
      const double v = x_up(a, 3, t);
      EXPECT_GT(v, prev);
      EXPECT_GE(v, x_r(a, 3, t));
      prev = v;
    }
  }
}

TEST(XUp, DerivativeMatchesRate) {
  const double h = 1e-5;
  for (const double t : {0.3, 1.2}) {
    const double fd = (x_up(1.5, 3, t + h) - x_up(1.5, 3, t - h)) / (2.0 * h);
    EXPECT_NEAR(fd, x_up_rate(1.5, 3, t), 1e-7);
  }
}

}  // namespace
}  // namespace lamcat
