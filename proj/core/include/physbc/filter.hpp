#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "physbc/models.hpp"
#include "physbc/sampling.hpp"

namespace physbc {

struct FilterConfig {
  double threshold = 0.005;  // delta: keep samples with ||f_phy(x) - y|| <= delta

  void validate() const;
};

struct FilterOutcome {
  Dataset retained;
  std::size_t retained_count = 0;
  std::size_t discarded_count = 0;
  std::vector<double> discrepancies;  // one per input sample, input order
  std::vector<bool> kept;             // one per input sample

  std::size_t input_count() const noexcept { return retained_count + discarded_count; }
  double retention_fraction() const noexcept;
};

/// Keeps exactly the pairs whose recorded successor lies within the
/// threshold (Euclidean, inclusive) of the physics-model prediction.
FilterOutcome apply_filter(const Dataset& dataset, const SystemModel& physics,
                           const FilterConfig& config);

/// Largest run of consecutive discarded samples. In 1-D samples are taken
/// in increasing state order and the run is bounded by the retained states
/// on either side (or the domain edge).
struct DiscardRun {
  std::size_t length = 0;
  std::vector<double> lower;  // state bounding the run from below (1-D) / first discarded state
  std::vector<double> upper;
};

struct DiscrepancyProfile {
  std::vector<double> discrepancies;  // input order
  std::optional<DiscardRun> max_jump;  // empty when nothing is discarded or no threshold given
};

std::vector<double> discrepancies(const Dataset& dataset, const SystemModel& physics);

DiscrepancyProfile discrepancy_profile(const Dataset& dataset, const SystemModel& physics,
                                       std::optional<double> threshold = std::nullopt);

/// Longest run of `false` in `kept`, ordering samples as described above.
std::optional<DiscardRun> max_discard_run(const Dataset& dataset, const std::vector<bool>& kept);

}  // namespace physbc
