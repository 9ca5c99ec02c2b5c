#pragma once

#include <cstddef>
#include <optional>
#include <string>

namespace physbc {

/// mu: radius -> probability mass for uniform samples on an interval of
/// length a (mu(r) = sqrt(pi) / (1.77 a) * r) or an a-by-b rectangle
/// (mu(r) = pi r^2 / (4 a b)), clamped at 1.
class GeometryFactor {
 public:
  static GeometryFactor interval(double a);
  static GeometryFactor rectangle(double a, double b);

  std::size_t dimension() const noexcept { return dim_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  /// Linear coefficient in 1-D, the r^2 coefficient in 2-D.
  double coefficient() const noexcept;

  double mu(double r) const;
  /// Inverse on [0, 1); phi >= 1 is a geometry-saturation error.
  double mu_inverse(double phi) const;

 private:
  GeometryFactor(std::size_t dim, double a, double b) : dim_(dim), a_(a), b_(b) {}

  std::size_t dim_;
  double a_;
  double b_;
};

/// phi = I^{-1}(1 - beta; c, P - c + 1). Requires P > c >= 1, beta in (0, 1).
double min_violation_level(double beta, std::size_t c, std::size_t sample_count);

enum class GuaranteeMode { kDeterministic, kProbabilistic };
enum class Verdict { kPass, kFail };

std::string to_string(GuaranteeMode mode);
GuaranteeMode guarantee_mode_from_string(const std::string& text);
std::string to_string(Verdict verdict);

struct CertificationReport {
  GuaranteeMode mode = GuaranteeMode::kDeterministic;
  double eta = 0.0;
  double lipschitz = 0.0;
  std::optional<double> eps_max;
  std::optional<double> phi;
  std::optional<double> mu_inv_phi;
  std::optional<std::size_t> decision_count;  // c
  std::optional<std::size_t> sample_count;    // P
  std::optional<double> beta;
  double condition_value = 0.0;
  Verdict verdict = Verdict::kFail;
  double confidence = 0.0;
  /// Upper bound on the robust optimum: eta plus the Lipschitz term.
  double robust_bound() const noexcept { return condition_value; }
};

/// condition = lipschitz * eps_max + eta; passes iff <= 0 with confidence 1.
CertificationReport check_deterministic(double eta, double lipschitz, double eps_max);

/// condition = eta + lipschitz * mu^{-1}(phi); confidence 1 - beta.
CertificationReport check_probabilistic(double eta, double lipschitz, double phi,
                                        const GeometryFactor& geometry, double beta);

/// Computes phi from (beta, c, P) and then runs check_probabilistic.
CertificationReport certify_probabilistic(double eta, double lipschitz, double beta,
                                          std::size_t c, std::size_t sample_count,
                                          const GeometryFactor& geometry);

/// Relative change (new - old) / |old| in percent.
double percent_change(double old_value, double new_value);

}  // namespace physbc
