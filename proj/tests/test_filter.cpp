#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "physbc/error.hpp"
#include "physbc/filter.hpp"

using namespace physbc;

namespace {

Dataset surrogate_grid(double amplitude, double frequency, std::size_t count) {
  const auto p = supply_demand_preset();
  const auto truth = p.physics.with_perturbation({amplitude, frequency, 0.0});
  const std::size_t counts[] = {count};
  return sample_grid(truth, p.domain, counts);
}

}  // namespace

TEST(Filter, ZeroPerturbationKeepsEverything) {
  const auto p = supply_demand_preset();
  const std::size_t counts[] = {1000};
  const auto data = sample_grid(p.physics, p.domain, counts);
  const auto out = apply_filter(data, p.physics, FilterConfig{1e-9});
  EXPECT_EQ(out.retained_count, 1000u);
  EXPECT_TRUE(out.retained.filtered());
  for (double d : out.discrepancies) EXPECT_EQ(d, 0.0);
  EXPECT_FALSE(max_discard_run(data, out.kept));
}

TEST(Filter, ArcsineRetention) {
  const double delta = 0.005;
  const auto data = surrogate_grid(delta * std::sqrt(2.0), 1.0 / (8 * 9e-5), 220000);
  const auto out = apply_filter(data, supply_demand_preset().physics, FilterConfig{delta});
  EXPECT_NEAR(out.retention_fraction(), 0.5, 0.01);
  EXPECT_EQ(out.input_count(), 220000u);
}

TEST(Filter, PeakDiscrepancyEqualsAmplitude) {
  const auto p = supply_demand_preset();
  const double nu = 2.0;
  Dataset d(1, SamplingScheme::kUniformGrid, p.domain);
  const auto truth = p.physics.with_perturbation({0.03, nu, 0.0});
  const double peak = 0.625;  // sin(2 pi nu x) = 1
  d.push_back(std::vector<double>{peak}, truth.step(std::vector<double>{peak}));
  EXPECT_NEAR(discrepancies(d, p.physics)[0], 0.03, 1e-15);
}

TEST(Filter, BoundaryIsInclusive) {
  const auto phys = SystemModel::affine(1, {1.0}, {0.0});
  Dataset d(1, SamplingScheme::kUniformGrid, RegionBox({0.0}, {1.0}));
  d.push_back(std::vector<double>{0.5}, std::vector<double>{0.75});
  d.push_back(std::vector<double>{0.25}, std::vector<double>{0.5});
  const auto out = apply_filter(d, phys, FilterConfig{0.25});
  EXPECT_EQ(out.retained_count, 2u);
  EXPECT_EQ(apply_filter(d, phys, FilterConfig{std::nextafter(0.25, 0.0)}).retained_count, 0u);
}

TEST(Filter, SubsetAndIdempotence) {
  const auto data = surrogate_grid(0.01, 3.0, 5000);
  const auto phys = supply_demand_preset().physics;
  const auto once = apply_filter(data, phys, FilterConfig{0.006});
  const auto twice = apply_filter(once.retained, phys, FilterConfig{0.006});
  EXPECT_EQ(twice.retained_count, once.retained_count);
  EXPECT_EQ(twice.retained.states(), once.retained.states());
  std::size_t j = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!once.kept[i]) continue;
    EXPECT_EQ(once.retained.state(j)[0], data.state(i)[0]);
    ++j;
  }
  EXPECT_EQ(j, once.retained_count);
}

TEST(Filter, DimensionMismatch) {
  const auto data = surrogate_grid(0.01, 3.0, 10);
  const auto phys2 = SystemModel::affine(2, {1, 0, 0, 1}, {0, 0});
  try {
    apply_filter(data, phys2, FilterConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kModelMismatch);
  }
  EXPECT_THROW(FilterConfig{-1.0}.validate(), Error);
}

TEST(Filter, MonotoneFieldSingleJump) {
  // Discrepancy grows with x; crossing delta once leaves one discarded tail.
  const auto phys = SystemModel::affine(1, {1.0}, {0.0});
  const auto truth = SystemModel::scalar_quadratic(0.0, 1.0, 0.1);
  const std::size_t counts[] = {101};
  const auto data = sample_grid(truth, RegionBox({0.0}, {1.0}), counts);
  const auto profile = discrepancy_profile(data, phys, 0.0255);  // kept up to x = 0.50
  ASSERT_TRUE(profile.max_jump);
  EXPECT_EQ(profile.max_jump->length, 50u);
  EXPECT_NEAR(profile.max_jump->lower[0], 0.5, 1e-12);
  EXPECT_NEAR(profile.max_jump->upper[0], 1.0, 1e-12);
}
