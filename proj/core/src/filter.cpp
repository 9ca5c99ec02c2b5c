#include "physbc/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "physbc/error.hpp"

namespace physbc {

void FilterConfig::validate() const {
  if (!(threshold > 0.0) || !std::isfinite(threshold)) {
    fail(ErrorKind::kInvalidArgument, "filter threshold must be finite and > 0");
  }
}

double FilterOutcome::retention_fraction() const noexcept {
  const std::size_t total = input_count();
  return total == 0 ? 0.0 : static_cast<double>(retained_count) / static_cast<double>(total);
}

std::vector<double> discrepancies(const Dataset& dataset, const SystemModel& physics) {
  if (physics.dimension() != dataset.dimension()) {
    fail(ErrorKind::kModelMismatch, "physics model has dimension " +
                                        std::to_string(physics.dimension()) + ", dataset has " +
                                        std::to_string(dataset.dimension()));
  }
  std::vector<double> out(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const State predicted = physics.step(dataset.state(i));
    const auto measured = dataset.successor(i);
    double sum = 0.0;
    for (std::size_t a = 0; a < predicted.size(); ++a) {
      const double d = predicted[a] - measured[a];
      sum += d * d;
    }
    out[i] = std::sqrt(sum);
  }
  return out;
}

FilterOutcome apply_filter(const Dataset& dataset, const SystemModel& physics,
                           const FilterConfig& config) {
  config.validate();
  FilterOutcome outcome{.retained = dataset.empty_like()};
  outcome.discrepancies = discrepancies(dataset, physics);
  outcome.kept.resize(dataset.size());
  outcome.retained.set_filtered(true);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const bool keep = outcome.discrepancies[i] <= config.threshold;
    outcome.kept[i] = keep;
    if (keep) {
      outcome.retained.push_back(dataset.state(i), dataset.successor(i));
      ++outcome.retained_count;
    } else {
      ++outcome.discarded_count;
    }
  }
  return outcome;
}

std::optional<DiscardRun> max_discard_run(const Dataset& dataset, const std::vector<bool>& kept) {
  if (kept.size() != dataset.size()) {
    fail(ErrorKind::kInvalidArgument, "keep mask does not match the dataset size");
  }
  const std::size_t n = dataset.dimension();
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (n == 1) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return dataset.state(a)[0] < dataset.state(b)[0];
    });
  }
  std::size_t best_len = 0, best_start = 0;
  for (std::size_t pos = 0; pos < order.size();) {
    if (kept[order[pos]]) {
      ++pos;
      continue;
    }
    std::size_t end = pos;
    while (end < order.size() && !kept[order[end]]) ++end;
    if (end - pos > best_len) {
      best_len = end - pos;
      best_start = pos;
    }
    pos = end;
  }
  if (best_len == 0) return std::nullopt;

  auto as_state = [](std::span<const double> s) { return std::vector<double>(s.begin(), s.end()); };
  DiscardRun run{.length = best_len};
  if (n == 1) {
    run.lower = best_start == 0 ? dataset.domain().lower()
                                : as_state(dataset.state(order[best_start - 1]));
    const std::size_t after = best_start + best_len;
    run.upper = after == order.size() ? dataset.domain().upper()
                                      : as_state(dataset.state(order[after]));
  } else {
    run.lower = as_state(dataset.state(order[best_start]));
    run.upper = as_state(dataset.state(order[best_start + best_len - 1]));
  }
  return run;
}

DiscrepancyProfile discrepancy_profile(const Dataset& dataset, const SystemModel& physics,
                                       std::optional<double> threshold) {
  DiscrepancyProfile profile{.discrepancies = discrepancies(dataset, physics)};
  if (threshold) {
    FilterConfig{*threshold}.validate();
    std::vector<bool> kept(dataset.size());
    for (std::size_t i = 0; i < kept.size(); ++i) kept[i] = profile.discrepancies[i] <= *threshold;
    profile.max_jump = max_discard_run(dataset, kept);
  }
  return profile;
}

}  // namespace physbc
