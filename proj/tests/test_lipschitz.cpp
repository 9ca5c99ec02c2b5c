#include <gtest/gtest.h>

#include <cmath>

#include "physbc/error.hpp"
#include "physbc/lipschitz.hpp"
#include "physbc/random.hpp"

using namespace physbc;

namespace {

const BarrierTemplate kLinear(1, {{1}, {0}});

Dataset dense(const SystemModel& model, std::size_t count) {
  const std::size_t counts[] = {count};
  return sample_grid(model, RegionBox({0.0}, {1.0}), counts);
}

}  // namespace

TEST(Lipschitz, LinearBarrierPairwise) {
  const BarrierCertificate cert{kLinear, {3.0, 0.0}, 0.5, 0.0, 1.0};
  const auto data = dense(SystemModel::affine(1, {0.8}, {0.5}), 2000);
  const auto est = estimate_pairwise(cert, data, LipschitzConfig{});
  EXPECT_GE(est.l1, 3.0);
  EXPECT_LE(est.l1, 3.0 * 1.1 + 1e-9);
  // flow = 3 (0.8 x + 0.5) - 0.5 * 3 x, slope 0.9
  EXPECT_NEAR(est.l2 / 1.1, 0.9, 0.045);
  EXPECT_EQ(est.l, std::max(est.l1, est.l2));
  EXPECT_GE(est.l, est.max_observed_slope);
}

TEST(Lipschitz, ConstantBarrier) {
  const BarrierCertificate cert{kLinear, {0.0, 2.0}, 0.5, 0.0, 1.0};
  const auto est = estimate_pairwise(cert, dense(SystemModel::affine(1, {0.8}, {0.5}), 100),
                                     LipschitzConfig{});
  EXPECT_EQ(est.l1, 0.0);
}

TEST(Lipschitz, ExtremeValueLinear) {
  const BarrierCertificate cert{kLinear, {3.0, 0.0}, 0.5, 0.0, 1.0};
  const auto data = dense(SystemModel::affine(1, {0.8}, {0.5}), 5000);
  LipschitzConfig cfg;
  cfg.method = LipschitzMethod::kExtremeValue;
  const auto est = estimate_lipschitz(cert, data, cfg);
  EXPECT_EQ(est.method, LipschitzMethod::kExtremeValue);
  EXPECT_GE(est.l1, 3.0 - 1e-9);
  EXPECT_LE(est.l1, 3.3);
  EXPECT_NEAR(est.l2, 0.9, 0.045);
  EXPECT_GE(est.l, est.max_observed_slope);
}

TEST(Lipschitz, IdenticalMaxima) {
  const std::vector<double> m(50, 2.5);
  EXPECT_DOUBLE_EQ(reverse_weibull_location(m), 2.5);
}

TEST(Lipschitz, WeibullLocationAboveObserved) {
  Rng rng(9);
  std::vector<double> m(2000);
  // reverse Weibull, shape 2, scale 0.5, endpoint 4
  for (double& v : m) v = 4.0 - 0.5 * std::sqrt(-std::log1p(-rng.uniform01()));
  const double loc = reverse_weibull_location(m);
  EXPECT_GE(loc, *std::max_element(m.begin(), m.end()));
  EXPECT_NEAR(loc, 4.0, 0.05);
}

TEST(Lipschitz, CoincidentStatesAreDegenerate) {
  const std::vector<double> states(10, 0.3);
  const std::vector<double> values(10, 1.0);
  try {
    pairwise_max_slope(values, states, 1, LipschitzConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerateData);
  }
  const std::vector<double> few{1.0};
  EXPECT_THROW(extreme_value_slope(few, few, 1, LipschitzConfig{}), Error);
}

TEST(Lipschitz, MonotoneInData) {
  Rng rng(21);
  std::vector<double> states, values;
  double last = 0.0;
  LipschitzConfig cfg;
  cfg.pair_budget = 0;  // neighbours only, so the pair set only grows
  for (int i = 0; i < 200; ++i) {
    const double x = rng.uniform01();
    states.push_back(x);
    values.push_back(std::sin(7 * x) + 0.3 * x * x);
    if (states.size() < 2) continue;
    double best = 0.0;
    for (std::size_t a = 0; a < states.size(); ++a) {
      for (std::size_t b = a + 1; b < states.size(); ++b) {
        if (states[a] == states[b]) continue;
        best = std::max(best, std::abs(values[a] - values[b]) / std::abs(states[a] - states[b]));
      }
    }
    const double now = pairwise_max_slope(values, states, 1, cfg);
    EXPECT_GE(now, last);
    EXPECT_NEAR(now, best, 1e-12) << "sorted neighbours attain the 1-D maximum";
    last = now;
  }
}

TEST(Lipschitz, MethodNames) {
  EXPECT_EQ(lipschitz_method_from_string("extreme-value"), LipschitzMethod::kExtremeValue);
  EXPECT_EQ(to_string(LipschitzMethod::kPairwiseMax), "pairwise-max");
  EXPECT_THROW(lipschitz_method_from_string("magic"), Error);
}
