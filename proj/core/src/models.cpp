#include "physbc/models.hpp"

#include <cmath>
#include <numbers>

#include "physbc/error.hpp"
#include "physbc/random.hpp"

namespace physbc {

RegionBox::RegionBox(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty() || lower_.size() != upper_.size()) {
    fail(ErrorKind::kInvalidArgument, "region bounds must be non-empty and of equal size");
  }
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i]) || !(lower_[i] < upper_[i])) {
      fail(ErrorKind::kInvalidArgument,
           "region requires finite lower < upper on axis " + std::to_string(i));
    }
  }
}

double RegionBox::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lower_.size(); ++i) v *= upper_[i] - lower_[i];
  return v;
}

bool RegionBox::contains(std::span<const double> x) const {
  if (x.size() != lower_.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(lower_[i] <= x[i] && x[i] <= upper_[i])) return false;
  }
  return true;
}

bool RegionBox::contains(const RegionBox& other) const {
  return contains(other.lower_) && contains(other.upper_);
}

double PerturbationField::operator()(double xi) const {
  return amplitude * std::sin(2.0 * std::numbers::pi * frequency * xi + phase);
}

void PerturbationField::validate() const {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    fail(ErrorKind::kInvalidArgument, "perturbation amplitude must be finite and >= 0");
  }
  if (!(frequency > 0.0) || !std::isfinite(frequency)) {
    fail(ErrorKind::kInvalidArgument, "perturbation frequency must be finite and > 0");
  }
  if (!std::isfinite(phase)) fail(ErrorKind::kInvalidArgument, "perturbation phase must be finite");
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kAffine: return "affine";
    case ModelKind::kQuadratic: return "quadratic";
    case ModelKind::kPerturbed: return "perturbed";
  }
  return "unknown";
}

namespace {

void require_size(const std::vector<double>& v, std::size_t expected, const char* what) {
  if (v.size() != expected) {
    fail(ErrorKind::kInvalidArgument, std::string(what) + " has " + std::to_string(v.size()) +
                                          " entries, expected " + std::to_string(expected));
  }
  for (double c : v) {
    if (!std::isfinite(c)) fail(ErrorKind::kInvalidArgument, std::string(what) + " must be finite");
  }
}

}  // namespace

SystemModel SystemModel::affine(std::size_t dim, std::vector<double> linear,
                                 std::vector<double> offset) {
  if (dim == 0) fail(ErrorKind::kInvalidArgument, "model dimension must be positive");
  require_size(linear, dim * dim, "affine linear part");
  require_size(offset, dim, "affine offset");
  SystemModel m;
  m.family_ = ModelKind::kAffine;
  m.dim_ = dim;
  m.linear_ = std::move(linear);
  m.offset_ = std::move(offset);
  return m;
}

SystemModel SystemModel::quadratic(std::size_t dim, std::vector<double> offset,
                                   std::vector<double> linear, std::vector<double> quad) {
  if (dim == 0) fail(ErrorKind::kInvalidArgument, "model dimension must be positive");
  require_size(offset, dim, "quadratic offset");
  require_size(linear, dim * dim, "quadratic linear part");
  require_size(quad, dim * dim * dim, "quadratic second-order part");
  SystemModel m;
  m.family_ = ModelKind::kQuadratic;
  m.dim_ = dim;
  m.offset_ = std::move(offset);
  m.linear_ = std::move(linear);
  m.quad_ = std::move(quad);
  return m;
}

SystemModel SystemModel::scalar_quadratic(double c0, double c1, double c2) {
  return quadratic(1, {c0}, {c1}, {c2});
}

SystemModel SystemModel::with_perturbation(const PerturbationField& field) const {
  field.validate();
  SystemModel m = *this;
  m.perturbation_ = field;
  return m;
}

SystemModel SystemModel::physics() const {
  SystemModel m = *this;
  m.perturbation_.reset();
  return m;
}

ModelKind SystemModel::kind() const noexcept {
  return perturbation_ ? ModelKind::kPerturbed : family_;
}

State SystemModel::step(std::span<const double> x) const {
  if (x.size() != dim_) {
    fail(ErrorKind::kInvalidState, "state has dimension " + std::to_string(x.size()) +
                                       ", model expects " + std::to_string(dim_));
  }
  for (double xi : x) {
    if (!std::isfinite(xi)) fail(ErrorKind::kInvalidState, "state is not finite");
  }
  State next(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
      double coeff = linear_[i * dim_ + j];
      if (family_ == ModelKind::kQuadratic) {
        for (std::size_t k = 0; k < dim_; ++k) coeff += quad_[(i * dim_ + j) * dim_ + k] * x[k];
      }
      acc += x[j] * coeff;
    }
    next[i] = offset_[i] + acc;
  }
  if (perturbation_) {
    for (std::size_t i = 0; i < dim_; ++i) next[i] += (*perturbation_)(x[i]);
  }
  return next;
}

Preset supply_demand_preset() {
  return Preset{
      .name = "supply-demand",
      .physics = SystemModel::affine(1, {0.8}, {0.5}),
      .domain = RegionBox({0.5}, {2.7}),
      .initial = RegionBox({0.5}, {0.6}),
      .unsafe = RegionBox({2.6}, {2.7}),
      // Discarded bands are a quarter period wide; this sizes eps_max ~ 9e-5.
      .perturbation_frequency = 1.0 / (8.0 * 9e-5),
  };
}

Preset logistic_growth_preset() {
  return Preset{
      .name = "logistic-growth",
      .physics = SystemModel::scalar_quadratic(0.0, 1.3, -0.5),
      .domain = RegionBox({0.1}, {1.0}),
      .initial = RegionBox({0.1}, {0.3}),
      .unsafe = RegionBox({0.7}, {1.0}),
      .perturbation_frequency = 1.0 / (8.0 * 8e-5),
  };
}

Preset preset_by_name(const std::string& name) {
  if (name == "supply-demand") return supply_demand_preset();
  if (name == "logistic-growth" || name == "logistic") return logistic_growth_preset();
  fail(ErrorKind::kValidation, "unknown system preset '" + name + "'");
}

std::vector<State> simulate(const SystemModel& model, std::span<const double> x0,
                            std::size_t horizon) {
  std::vector<State> trajectory;
  trajectory.reserve(horizon + 1);
  trajectory.emplace_back(x0.begin(), x0.end());
  for (std::size_t k = 0; k < horizon; ++k) {
    trajectory.push_back(model.step(trajectory.back()));
  }
  return trajectory;
}

SafetyReport check_safety_empirically(const SystemModel& model, const RegionBox& initial,
                                      const RegionBox& unsafe, std::size_t trajectories,
                                      std::size_t horizon, std::uint64_t seed) {
  if (trajectories == 0 || horizon == 0) {
    fail(ErrorKind::kInvalidArgument, "trajectory count and horizon must be positive");
  }
  if (initial.dimension() != model.dimension() || unsafe.dimension() != model.dimension()) {
    fail(ErrorKind::kModelMismatch, "region dimension does not match the model");
  }
  SafetyReport report{.trajectories = trajectories, .horizon = horizon};
  Rng rng(seed);
  const std::size_t n = model.dimension();
  for (std::size_t t = 0; t < trajectories; ++t) {
    State x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rng.uniform(initial.lower()[i], initial.upper()[i]);
    std::vector<State> states{x};
    for (std::size_t k = 0;; ++k) {
      if (unsafe.contains(states.back())) {
        ++report.violations;
        if (!report.first_violation) {
          report.first_violation = SafetyViolation{t, k, states};
        }
        break;
      }
      if (k == horizon) break;
      states.push_back(model.step(states.back()));
    }
  }
  return report;
}

}  // namespace physbc
