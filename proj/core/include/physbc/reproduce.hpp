#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "physbc/certify.hpp"
#include "physbc/config.hpp"

namespace physbc {

/// One row of the published comparison table (traditional = unfiltered).
struct PublishedRow {
  std::string system;  // preset name
  GuaranteeMode mode;
  bool physics_informed;
  std::size_t samples;
  std::optional<double> delta;
  std::optional<double> eps_max;
  std::optional<double> phi;
  double lipschitz;
  double eta;
  std::optional<double> eta_change_percent;
  double condition;
  std::optional<double> condition_change_percent;
  /// Interval length used by the geometry factor (probabilistic rows).
  double interval_length;
};

/// The eight published rows in table order.
const std::vector<PublishedRow>& published_rows();

/// Condition recomputed from a published row's own numbers.
CertificationReport published_condition(const PublishedRow& row);

/// The run configuration that reproduces a published row.
RunConfig reproduction_config(const PublishedRow& row, std::uint64_t seed = 1);

struct ReproducedRow {
  PublishedRow published;
  std::size_t samples = 0;  // P (or S when unfiltered)
  std::optional<double> eps_max;
  std::optional<double> phi;
  double lipschitz = 0.0;
  double eta = 0.0;
  double condition = 0.0;
  std::string verdict;
  std::optional<double> eta_change_percent;        // vs our traditional row
  std::optional<double> condition_change_percent;  // vs our traditional row
  std::string error;
};

std::vector<ReproducedRow> reproduce_table(std::uint64_t seed = 1, std::size_t jobs = 1);
std::string reproduction_to_text(const std::vector<ReproducedRow>& rows);
std::string reproduction_to_csv(const std::vector<ReproducedRow>& rows);

}  // namespace physbc
