#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace physbc {

using State = std::vector<double>;

/// Axis-aligned box {x : lower <= x <= upper}.
class RegionBox {
 public:
  RegionBox(std::vector<double> lower, std::vector<double> upper);

  std::size_t dimension() const noexcept { return lower_.size(); }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }
  double width(std::size_t axis) const { return upper_.at(axis) - lower_.at(axis); }
  double volume() const;

  bool contains(std::span<const double> x) const;
  bool contains(const RegionBox& other) const;

  friend bool operator==(const RegionBox&, const RegionBox&) = default;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

/// w(x)_i = amplitude * sin(2*pi*frequency*x_i + phase).
struct PerturbationField {
  double amplitude = 0.0;
  double frequency = 1.0;  // cycles per unit of state
  double phase = 0.0;      // radians

  double operator()(double xi) const;
  void validate() const;

  friend bool operator==(const PerturbationField&, const PerturbationField&) = default;
};

enum class ModelKind { kAffine, kQuadratic, kPerturbed };

std::string to_string(ModelKind kind);

/// Analytic discrete-time map x(k+1) = f(x(k)).
///
/// Affine:    f(x) = offset + linear * x
/// Quadratic: f_i(x) = offset_i + sum_j x_j * (linear_ij + sum_k quad_ijk * x_k)
///
/// Either family may carry a PerturbationField, which is added
/// componentwise; a perturbed model plays the role of the unknown true
/// system, its unperturbed part the physics model.
class SystemModel {
 public:
  static SystemModel affine(std::size_t dim, std::vector<double> linear,
                            std::vector<double> offset);
  static SystemModel quadratic(std::size_t dim, std::vector<double> offset,
                               std::vector<double> linear,
                               std::vector<double> quad);

  /// 1-D shorthand: f(x) = c0 + c1 x + c2 x^2.
  static SystemModel scalar_quadratic(double c0, double c1, double c2);

  SystemModel with_perturbation(const PerturbationField& field) const;
  SystemModel physics() const;

  /// kPerturbed when a perturbation is attached, otherwise the family.
  ModelKind kind() const noexcept;
  ModelKind family() const noexcept { return family_; }
  std::size_t dimension() const noexcept { return dim_; }
  const std::optional<PerturbationField>& perturbation() const noexcept {
    return perturbation_;
  }
  const std::vector<double>& offset() const noexcept { return offset_; }
  const std::vector<double>& linear() const noexcept { return linear_; }
  const std::vector<double>& quad() const noexcept { return quad_; }

  State step(std::span<const double> x) const;

 private:
  SystemModel() = default;

  ModelKind family_ = ModelKind::kAffine;
  std::size_t dim_ = 0;
  std::vector<double> offset_;
  std::vector<double> linear_;  // dim x dim, row-major
  std::vector<double> quad_;    // dim x dim x dim, quad_[(i*dim + j)*dim + k]
  std::optional<PerturbationField> perturbation_;
};

/// Builtin case-study systems with their state, initial and unsafe boxes.
struct Preset {
  std::string name;
  SystemModel physics;
  RegionBox domain;
  RegionBox initial;
  RegionBox unsafe;
  /// Surrogate frequency for the true system (cycles per unit state).
  double perturbation_frequency;
};

/// x+ = x + 0.1 (5 - 2x) on X=[0.5,2.7], X0=[0.5,0.6], Xu=[2.6,2.7].
Preset supply_demand_preset();
/// x+ = x + 0.5 x (1 - x) - 0.2 x on X=[0.1,1], X0=[0.1,0.3], Xu=[0.7,1].
Preset logistic_growth_preset();
/// Looks up "supply-demand" or "logistic-growth"; throws on unknown names.
Preset preset_by_name(const std::string& name);

/// sequence x0, f(x0), ..., f^horizon(x0).
std::vector<State> simulate(const SystemModel& model, std::span<const double> x0,
                            std::size_t horizon);

struct SafetyViolation {
  std::size_t trajectory = 0;
  std::size_t step = 0;
  std::vector<State> states;  // x0 .. offending state
};

struct SafetyReport {
  std::size_t trajectories = 0;
  std::size_t horizon = 0;
  std::size_t violations = 0;
  std::optional<SafetyViolation> first_violation;
};

/// Simulates `trajectories` runs from uniform initial states in `initial`
/// and counts runs that ever land in `unsafe`.
SafetyReport check_safety_empirically(const SystemModel& model,
                                      const RegionBox& initial,
                                      const RegionBox& unsafe,
                                      std::size_t trajectories,
                                      std::size_t horizon, std::uint64_t seed);

}  // namespace physbc
