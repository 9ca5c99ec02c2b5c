#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "physbc/certify.hpp"
#include "physbc/error.hpp"

using namespace physbc;

TEST(Geometry, Coefficients) {
  EXPECT_NEAR(GeometryFactor::interval(2.2).coefficient(), std::sqrt(std::numbers::pi) / (1.77 * 2.2), 1e-15);
  EXPECT_NEAR(GeometryFactor::interval(2.2).coefficient(), 0.455, 0.005);
  EXPECT_NEAR(GeometryFactor::interval(0.9).coefficient(), 1.113, 0.005);
  EXPECT_NEAR(GeometryFactor::rectangle(2, 3).coefficient(), std::numbers::pi / 24, 1e-15);
}

TEST(Geometry, RoundTripAndSaturation) {
  for (const auto& g : {GeometryFactor::interval(0.9), GeometryFactor::rectangle(1.5, 0.4)}) {
    for (double r : {0.0, 1e-6, 1e-3, 0.05}) {
      EXPECT_NEAR(g.mu_inverse(g.mu(r)), r, 1e-14 + 1e-12 * r);
    }
    EXPECT_EQ(g.mu(1e6), 1.0);
    try {
      g.mu_inverse(1.0);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kGeometrySaturation);
    }
  }
  EXPECT_THROW(GeometryFactor::interval(0.0), Error);
}

TEST(MinViolationLevel, PublishedLogistic) {
  EXPECT_NEAR(min_violation_level(0.05, 6, 130234), 8.08e-5, 2e-7);
  EXPECT_NEAR(min_violation_level(0.05, 6, 150260), 7.0e-5, 1e-6);
  EXPECT_LT(min_violation_level(1.0 - 1e-12, 6, 1000), 1e-3);
}

TEST(MinViolationLevel, InsufficientSamples) {
  try {
    min_violation_level(0.05, 6, 6);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInsufficientSamples);
  }
  EXPECT_THROW(min_violation_level(0.0, 6, 100), Error);
}

TEST(Deterministic, PublishedRows) {
  const auto sd = check_deterministic(-0.0527, 103.72, 9e-5);
  EXPECT_NEAR(sd.condition_value, -0.0434, 5e-5);
  EXPECT_EQ(sd.verdict, Verdict::kPass);
  EXPECT_EQ(sd.confidence, 1.0);
  EXPECT_NEAR(check_deterministic(-0.0694, 222.87, 8e-5).condition_value, -0.0516, 5e-5);
  EXPECT_EQ(check_deterministic(0.01, 0.0, 1e-3).verdict, Verdict::kFail);
  EXPECT_EQ(check_deterministic(0.01, 50.0, 1e-3).verdict, Verdict::kFail);
}

TEST(Probabilistic, PublishedRows) {
  const auto sd = check_probabilistic(-0.2094, 11.51, 6.18e-5, GeometryFactor::interval(2.2), 0.05);
  EXPECT_NEAR(sd.condition_value, -0.2078, 5e-5);
  EXPECT_EQ(sd.verdict, Verdict::kPass);
  EXPECT_NEAR(sd.confidence, 0.95, 1e-15);
  const auto lg = check_probabilistic(-0.0021, 5.0397, 8.08e-5, GeometryFactor::interval(0.9), 0.05);
  EXPECT_NEAR(lg.condition_value, -0.0017, 5e-5);
  EXPECT_EQ(check_probabilistic(-0.3, 9.0, 0.0, GeometryFactor::interval(1), 0.05).condition_value, -0.3);
}

TEST(Certify, ZeroConditionPasses) {
  EXPECT_EQ(check_deterministic(-0.5, 1.0, 0.5).verdict, Verdict::kPass);
}

TEST(Certify, MonotoneInInputs) {
  const auto g = GeometryFactor::interval(1.0);
  double last = -1e9;
  for (double eta : {-1.0, -0.5, -0.1, 0.0}) {
    const double c = check_probabilistic(eta, 2.0, 1e-3, g, 0.05).condition_value;
    EXPECT_GT(c, last);
    last = c;
  }
  last = -1e9;
  for (double phi : {0.0, 1e-4, 1e-3, 1e-2}) {
    const double c = check_probabilistic(-0.1, 2.0, phi, g, 0.05).condition_value;
    EXPECT_GT(c, last);
    last = c;
  }
  last = -1e9;
  for (double l : {0.0, 1.0, 10.0}) {
    const double c = check_deterministic(-0.1, l, 1e-3).condition_value;
    EXPECT_GT(c, last);
    last = c;
  }
}

TEST(Certify, PercentChange) {
  EXPECT_NEAR(percent_change(-0.0231, -0.0434), -87.878787, 1e-4);
  EXPECT_NEAR(percent_change(-0.0235, -0.0527), -124.255, 1e-3);
}

TEST(Certify, Names) {
  EXPECT_EQ(guarantee_mode_from_string("probabilistic"), GuaranteeMode::kProbabilistic);
  EXPECT_EQ(to_string(Verdict::kPass), "pass");
  EXPECT_THROW(guarantee_mode_from_string("maybe"), Error);
}
