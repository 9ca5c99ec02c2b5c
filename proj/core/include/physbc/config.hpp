#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "physbc/barrier.hpp"
#include "physbc/certify.hpp"
#include "physbc/lipschitz.hpp"
#include "physbc/models.hpp"
#include "physbc/sampling.hpp"
#include "physbc/solver.hpp"

namespace physbc {

/// Everything one pipeline run needs. Parsed from a single JSON document.
struct RunConfig {
  // system
  std::string system_name = "supply-demand";  // preset name or "custom"
  SystemModel physics = supply_demand_preset().physics;
  SafetyRegions regions{supply_demand_preset().domain, supply_demand_preset().initial,
                        supply_demand_preset().unsafe};
  /// Ground-truth surrogate f_phy + A sin(2 pi nu x + phase); A defaults
  /// to delta * sqrt(2).
  bool perturbation_enabled = true;
  std::optional<double> perturbation_amplitude;
  double perturbation_frequency = supply_demand_preset().perturbation_frequency;
  double perturbation_phase = 0.0;

  // sampling
  SamplingScheme scheme = SamplingScheme::kUniformGrid;
  std::size_t samples = 220'000;            // S (per axis for grids when n > 1)
  std::vector<std::size_t> grid_counts;     // explicit per-axis grid counts, optional
  std::uint64_t seed = 1;

  // filter
  bool filter_enabled = true;
  double delta = 0.005;

  // barrier / scenario program
  double kappa = 0.83;
  unsigned template_degree = 2;
  bool template_constant = true;
  AssemblyOptions assembly;
  std::optional<double> cover_density;      // X0/Xu cover points per unit length

  // certification
  GuaranteeMode mode = GuaranteeMode::kDeterministic;
  std::optional<double> beta;
  std::optional<std::size_t> decision_count;  // c, default z + 3

  LipschitzConfig lipschitz;
  SolverConfig solver;
  bool cross_check = false;                 // also run solve_minmax_direct

  // empirical validation
  std::size_t validation_trajectories = 1000;
  std::size_t validation_horizon = 500;
  std::uint64_t validation_seed = 99;

  // outputs
  std::filesystem::path output_dir;         // empty: no artifacts written
  bool write_datasets = true;

  /// The surrogate true system f_phy + w.
  SystemModel true_system() const;
  BarrierTemplate barrier_template() const;
  std::size_t effective_decision_count() const;
  std::optional<GeometryFactor> geometry() const;

  /// Throws validation errors (regions, mode-specific fields, ranges).
  void validate() const;
};

/// Preset-backed config for one of the case studies.
RunConfig preset_config(const std::string& preset, GuaranteeMode mode);

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);
std::string run_config_to_json(const RunConfig& config, int indent = 2);

}  // namespace physbc
