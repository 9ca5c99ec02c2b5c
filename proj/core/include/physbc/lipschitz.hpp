#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "physbc/barrier.hpp"
#include "physbc/sampling.hpp"

namespace physbc {

enum class LipschitzMethod { kPairwiseMax, kExtremeValue };

std::string to_string(LipschitzMethod method);
LipschitzMethod lipschitz_method_from_string(const std::string& text);

struct LipschitzConfig {
  LipschitzMethod method = LipschitzMethod::kPairwiseMax;
  double safety_multiplier = 1.1;  // pairwise-max only
  std::size_t pair_budget = 1'000'000;
  std::uint64_t seed = 20240601;
  /// 1-D: always include every pair of sorted neighbours.
  bool include_neighbours = true;
  // extreme-value method
  std::size_t batches = 200;
  std::size_t batch_size = 500;
  std::size_t local_window = 8;
};

struct LipschitzEstimate {
  double l1 = 0.0;  // of x -> B(x)
  double l2 = 0.0;  // of x -> B(f(x)) - kappa B(x)
  double l = 0.0;   // max(l1, l2)
  LipschitzMethod method = LipschitzMethod::kPairwiseMax;
  std::size_t samples_used = 0;
  double safety_multiplier = 1.0;
  double max_observed_slope = 0.0;
};

/// Maximum of |v_i - v_j| / ||x_i - x_j|| over the configured pair set.
/// Coincident pairs are skipped; throws degenerate-data when none remain.
double pairwise_max_slope(std::span<const double> values, std::span<const double> states,
                          std::size_t dim, const LipschitzConfig& config,
                          std::size_t* pairs_used = nullptr);

/// Location (upper endpoint) of a reverse-Weibull law fitted to batch
/// maxima by matching mean, variance and skewness; never below max(maxima).
double reverse_weibull_location(std::span<const double> maxima);

/// Batch maxima of random local slopes, then reverse_weibull_location.
double extreme_value_slope(std::span<const double> values, std::span<const double> states,
                           std::size_t dim, const LipschitzConfig& config,
                           double* observed_max = nullptr);

LipschitzEstimate estimate_pairwise(const BarrierCertificate& certificate, const Dataset& data,
                                    const LipschitzConfig& config);
LipschitzEstimate estimate_extreme_value(const BarrierCertificate& certificate,
                                         const Dataset& data, const LipschitzConfig& config);
/// Dispatches on config.method.
LipschitzEstimate estimate_lipschitz(const BarrierCertificate& certificate, const Dataset& data,
                                     const LipschitzConfig& config);

}  // namespace physbc
