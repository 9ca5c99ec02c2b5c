#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "physbc/models.hpp"
#include "physbc/sampling.hpp"
#include "physbc/solver.hpp"

namespace physbc {

using Exponents = std::vector<unsigned>;

/// Monomial basis l^1..l^z for B(q, x) = sum_j q_j l^j(x).
class BarrierTemplate {
 public:
  BarrierTemplate(std::size_t dim, std::vector<Exponents> basis);

  /// Every monomial of total degree <= degree, highest degree first, so the
  /// 1-D quadratic template is (x^2, x, 1).
  static BarrierTemplate full(std::size_t dim, unsigned degree, bool include_constant = true);

  std::size_t dimension() const noexcept { return dim_; }
  std::size_t size() const noexcept { return basis_.size(); }
  const std::vector<Exponents>& basis() const noexcept { return basis_; }

  void features(std::span<const double> x, std::span<double> out) const;
  std::vector<double> features(std::span<const double> x) const;
  double evaluate(std::span<const double> q, std::span<const double> x) const;

  friend bool operator==(const BarrierTemplate&, const BarrierTemplate&) = default;

 private:
  std::size_t dim_;
  std::vector<Exponents> basis_;
};

double evaluate(const BarrierTemplate& tmpl, std::span<const double> q,
                std::span<const double> x);

struct BarrierCertificate {
  BarrierTemplate tmpl;
  std::vector<double> q;
  double kappa = 0.83;
  double alpha = 0.0;
  double rho = 0.0;

  double operator()(std::span<const double> x) const { return tmpl.evaluate(q, x); }
  /// B(f(x)) - kappa B(x) given the successor f(x).
  double flow(std::span<const double> x, std::span<const double> fx) const;
  bool levels_ordered() const noexcept { return rho > alpha; }
  /// Throws on q size mismatch or kappa outside (0, 1].
  void validate_shape() const;
};

enum class RowTag { kInitial, kUnsafe, kFlow };

std::string to_string(RowTag tag);

/// Regions of the safety problem.
struct SafetyRegions {
  RegionBox domain;
  RegionBox initial;
  RegionBox unsafe;

  /// Initial and unsafe boxes must sit inside the domain.
  void validate() const;
};

struct AssemblyOptions {
  double coefficient_bound = 100.0;  // |q_j| <= bound
  double level_bound = 1e4;          // |alpha|, |rho| <= bound
  double level_gap = 1e-4;           // rho - alpha >= gap
  bool bounded = true;               // false drops every box row
};

/// Scenario program over decision d = [alpha; rho; q_1..q_z] (eta implicit).
///   initial: B(q, x) - alpha <= eta
///   unsafe:  rho - B(q, x) <= eta
///   flow:    B(q, y) - kappa B(q, x) <= eta
struct ConstraintSystem {
  static constexpr std::size_t kAlpha = 0;
  static constexpr std::size_t kRho = 1;
  static constexpr std::size_t kFirstCoefficient = 2;

  EpigraphLp lp;
  std::vector<RowTag> tags;
  BarrierTemplate tmpl;
  double kappa = 0.83;
  std::size_t initial_rows = 0;
  std::size_t unsafe_rows = 0;
  std::size_t flow_rows = 0;
  std::vector<std::string> warnings;

  std::size_t rows() const noexcept { return tags.size(); }
  /// Decision-variable count c used by the probabilistic bound: q, alpha,
  /// rho and eta.
  std::size_t decision_count() const noexcept { return tmpl.size() + 3; }
};

/// `initial_states` / `unsafe_states` are flat row-major state arrays.
ConstraintSystem assemble(const BarrierTemplate& tmpl, double kappa, const Dataset& data,
                          std::span<const double> initial_states,
                          std::span<const double> unsafe_states, const SafetyRegions& regions,
                          const AssemblyOptions& options = {});

BarrierCertificate certificate_from_decision(const BarrierTemplate& tmpl, double kappa,
                                             std::span<const double> decision);

/// Uniform grid covering `box` with about `density` points per unit length
/// on each axis (at least 2 per axis).
std::vector<double> cover_states(const RegionBox& box, double density);

struct CertificateCheck {
  double initial_residual;  // max B(x) - alpha over initial samples
  double unsafe_residual;   // max rho - B(x) over unsafe samples
  double flow_residual;     // max B(y) - kappa B(x) over pairs
  bool levels_ordered;      // rho > alpha
  double tolerance;

  double max_residual() const;
  /// All residuals <= eta + tolerance and rho > alpha.
  bool passes(double eta) const;
};

CertificateCheck check_certificate(const BarrierCertificate& certificate, double tolerance,
                                   const Dataset& data, std::span<const double> initial_states,
                                   std::span<const double> unsafe_states);

}  // namespace physbc
