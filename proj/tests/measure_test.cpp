#include <gtest/gtest.h>

#include <cmath>

#include "lamcat/errors.hpp"
#include "lamcat/measure.hpp"

namespace lamcat {
namespace {

TEST(LambdaMeasure, KingmanDefaults) {
  const auto m = LambdaMeasure::kingman();
  EXPECT_EQ(m.kind(), MeasureKind::kingman);
  EXPECT_DOUBLE_EQ(m.alpha(), 2.0);
  EXPECT_DOUBLE_EQ(m.total_mass(), 1.0);
  EXPECT_FALSE(m.has_density());
  EXPECT_EQ(m.spec(), "kind=kingman scale=1");
}

TEST(LambdaMeasure, BetaRegularVariationConstant) {
  // A = 1 / B(1/2, 3/2) = 2 / pi
  const auto m = LambdaMeasure::beta(1.5);
  EXPECT_NEAR(m.a_lambda(), 0.6366197723675813, 1e-15);
  EXPECT_DOUBLE_EQ(m.total_mass(), 1.0);
  EXPECT_NEAR(m.density_at(0.25), std::pow(0.25, -0.5) * std::pow(0.75, 0.5) * 2.0 / M_PI, 1e-14);
}

TEST(LambdaMeasure, ScaleMultipliesEverything) {
  const auto m = LambdaMeasure::beta(1.25);
  const auto s = m.with_scale(7.3);
  EXPECT_NEAR(s.a_lambda(), 7.3 * m.a_lambda(), 1e-14);
  EXPECT_NEAR(s.total_mass(), 7.3, 1e-14);
  EXPECT_NEAR(s.density_at(0.3), 7.3 * m.density_at(0.3), 1e-13);
  EXPECT_EQ(s.shape_id(), m.shape_id());
  EXPECT_DOUBLE_EQ(s.unit_a_lambda(), m.unit_a_lambda());
}

TEST(LambdaMeasure, DistinctShapesHaveDistinctIds) {
  EXPECT_NE(LambdaMeasure::beta(1.5).shape_id(), LambdaMeasure::beta(1.5).shape_id());
}

TEST(LambdaMeasure, PurePowerTotalMass) {
  // int_0^1 p^(1-alpha) dp = 1 / (2 - alpha)
  const auto m = LambdaMeasure::builtin_density(1.5, "pure_power");
  EXPECT_NEAR(m.total_mass(), 2.0, 1e-10);
  EXPECT_DOUBLE_EQ(m.a_lambda(), 1.0);
}

TEST(LambdaMeasure, BetaDensityBuiltinIsNormalised) {
  for (const double alpha : {1.1, 1.5, 1.9}) {
    const auto m = LambdaMeasure::builtin_density(alpha, "beta_density");
    EXPECT_NEAR(m.total_mass(), 1.0, 1e-9) << "alpha=" << alpha;
    EXPECT_NEAR(m.a_lambda(), LambdaMeasure::beta(alpha).a_lambda(), 1e-14);
  }
}

TEST(LambdaMeasure, RejectsBadParameters) {
  EXPECT_THROW(LambdaMeasure::beta(2.0), DomainError);
  EXPECT_THROW(LambdaMeasure::beta(1.0), DomainError);
  EXPECT_THROW(LambdaMeasure::kingman(0.0), DomainError);
  EXPECT_THROW(LambdaMeasure::kingman(-1.0), DomainError);
  EXPECT_THROW(LambdaMeasure::builtin_density(1.5, "nope"), DomainError);
  EXPECT_THROW(LambdaMeasure::density(1.5, nullptr, 1.0), DomainError);
}

TEST(ParseMeasure, RoundTripsSpec) {
  for (const char* text : {"kind=kingman", "kind=beta alpha=1.5 scale=7.3", "kind=density alpha=1.25 density=pure_power"}) {
    const auto m = parse_measure(text);
    const auto again = parse_measure(m.spec());
    EXPECT_EQ(again.spec(), m.spec()) << text;
    EXPECT_EQ(again.kind(), m.kind());
    EXPECT_DOUBLE_EQ(again.alpha(), m.alpha());
    EXPECT_DOUBLE_EQ(again.scale(), m.scale());
  }
}

TEST(ParseMeasure, RejectsMalformedSpecs) {
  EXPECT_THROW(parse_measure("kind=beta"), DomainError);
  EXPECT_THROW(parse_measure("kind=beta alpha=1.5 color=red"), DomainError);
  EXPECT_THROW(parse_measure("kind=beta alpha=1.5 alpha=1.6"), DomainError);
  EXPECT_THROW(parse_measure("kind=beta alpha=x"), DomainError);
  EXPECT_THROW(parse_measure("kind=kingman alpha=1.5"), DomainError);
  EXPECT_THROW(parse_measure("kind=density alpha=1.5"), DomainError);
  EXPECT_THROW(parse_measure("kind=dirac"), DomainError);
  EXPECT_THROW(parse_measure("alpha"), DomainError);
}

TEST(IntegrateUnitDensity, BetaMomentsMatchClosedForm) {
  // Beta(1/2, 3/2): E[p] = 1/4, E[p^2] = (1/2 * 3/2) / (2 * 3) = 1/8.
  const auto m = LambdaMeasure::builtin_density(1.5, "beta_density");
  EXPECT_NEAR(integrate_unit_density(m, [](double p) { return p; }), 0.25, 1e-10);
  EXPECT_NEAR(integrate_unit_density(m, [](double p) { return p * p; }), 0.125, 1e-10);
}

}  // namespace
}  // namespace lamcat
