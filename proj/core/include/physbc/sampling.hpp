#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "physbc/models.hpp"

namespace physbc {

/// One measured transition: a state and its one-step successor.
struct SamplePair {
  State state;
  State successor;
};

enum class SamplingScheme { kUniformGrid, kIidUniform };

std::string to_string(SamplingScheme scheme);
SamplingScheme sampling_scheme_from_string(const std::string& text);

/// Ordered sample pairs stored as two flat row-major arrays.
class Dataset {
 public:
  Dataset(std::size_t dim, SamplingScheme scheme, RegionBox domain,
          std::optional<std::uint64_t> seed = std::nullopt);

  std::size_t dimension() const noexcept { return dim_; }
  std::size_t size() const noexcept { return states_.size() / dim_; }
  bool empty() const noexcept { return states_.empty(); }

  SamplingScheme scheme() const noexcept { return scheme_; }
  const RegionBox& domain() const noexcept { return domain_; }
  const std::optional<std::uint64_t>& seed() const noexcept { return seed_; }
  bool filtered() const noexcept { return filtered_; }
  void set_filtered(bool filtered) noexcept { filtered_ = filtered; }

  std::span<const double> state(std::size_t i) const {
    return {states_.data() + i * dim_, dim_};
  }
  std::span<const double> successor(std::size_t i) const {
    return {successors_.data() + i * dim_, dim_};
  }
  SamplePair pair(std::size_t i) const;

  const std::vector<double>& states() const noexcept { return states_; }
  const std::vector<double>& successors() const noexcept { return successors_; }

  void reserve(std::size_t count);
  void push_back(std::span<const double> state, std::span<const double> successor);

  /// Same metadata, no pairs.
  Dataset empty_like() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t dim_;
  SamplingScheme scheme_;
  RegionBox domain_;
  std::optional<std::uint64_t> seed_;
  bool filtered_ = false;
  std::vector<double> states_;
  std::vector<double> successors_;
};

inline constexpr std::size_t kDefaultMaxSamples = 200'000'000;

/// Lattice with count_per_axis[i] >= 2 points on axis i, endpoints included.
/// Axis 0 varies slowest.
Dataset sample_grid(const SystemModel& model, const RegionBox& domain,
                    std::span<const std::size_t> count_per_axis,
                    std::size_t max_samples = kDefaultMaxSamples);

Dataset sample_iid(const SystemModel& model, const RegionBox& domain, std::size_t count,
                   std::uint64_t seed);

/// Uniform lattice of states only (used for X0/Xu constraint covers).
std::vector<double> grid_states(const RegionBox& box, std::span<const std::size_t> count_per_axis);

/// Largest distance from any point of `domain` to the nearest state
/// (flat row-major, dimension taken from `domain`). Exact sorted-gap formula
/// in 1-D; otherwise a lattice scan with `reference_resolution` points per
/// axis (0 selects 10x the per-axis sample density).
double covering_radius(std::span<const double> states, const RegionBox& domain,
                       std::size_t reference_resolution = 0);

/// Lattice-scan estimate in any dimension; used by covering_radius for
/// n >= 2 and exposed so the 1-D exact formula can be cross-checked.
double covering_radius_lattice(std::span<const double> states, const RegionBox& domain,
                               std::size_t reference_resolution);

/// Writes `path` (CSV) and `path` + ".json" (metadata sidecar).
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);
std::filesystem::path sidecar_path(const std::filesystem::path& path);

/// FNV-1a over the raw sample bytes, as 16 hex digits.
std::string dataset_hash(const Dataset& dataset);

/// Shortest decimal with 17 significant digits; round-trips exactly.
std::string format_double(double value);

}  // namespace physbc
