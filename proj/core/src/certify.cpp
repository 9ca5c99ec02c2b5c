#include "physbc/certify.hpp"

#include <cmath>
#include <numbers>

#include "physbc/error.hpp"
#include "physbc/special_functions.hpp"

namespace physbc {

GeometryFactor GeometryFactor::interval(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) fail(ErrorKind::kInvalidArgument, "interval length must be positive");
  return GeometryFactor(1, a, 0.0);
}

GeometryFactor GeometryFactor::rectangle(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    fail(ErrorKind::kInvalidArgument, "rectangle sides must be positive");
  }
  return GeometryFactor(2, a, b);
}

double GeometryFactor::coefficient() const noexcept {
  // The 1.77 constant is kept as printed rather than replaced by sqrt(pi).
  if (dim_ == 1) return std::sqrt(std::numbers::pi) / (1.77 * a_);
  return std::numbers::pi / (4.0 * a_ * b_);
}

double GeometryFactor::mu(double r) const {
  if (!(r >= 0.0)) fail(ErrorKind::kDomain, "mu is defined for r >= 0");
  const double value = dim_ == 1 ? coefficient() * r : coefficient() * r * r;
  return std::min(1.0, value);
}

double GeometryFactor::mu_inverse(double phi) const {
  if (!(phi >= 0.0)) fail(ErrorKind::kDomain, "mu inverse is defined for phi >= 0");
  if (phi >= 1.0) {
    fail(ErrorKind::kGeometrySaturation, "violation level " + std::to_string(phi) +
                                             " saturates the geometry factor");
  }
  return dim_ == 1 ? phi / coefficient() : std::sqrt(phi / coefficient());
}

double min_violation_level(double beta, std::size_t c, std::size_t sample_count) {
  if (!(beta > 0.0 && beta < 1.0)) fail(ErrorKind::kDomain, "beta must lie in (0, 1)");
  if (c < 1) fail(ErrorKind::kDomain, "decision-variable count must be at least 1");
  if (sample_count <= c) {
    fail(ErrorKind::kInsufficientSamples, "need more samples (" + std::to_string(sample_count) +
                                              ") than decision variables (" + std::to_string(c) + ")");
  }
  return beta_inc_inv(1.0 - beta, static_cast<double>(c),
                      static_cast<double>(sample_count - c + 1));
}

std::string to_string(GuaranteeMode mode) {
  return mode == GuaranteeMode::kDeterministic ? "deterministic" : "probabilistic";
}

GuaranteeMode guarantee_mode_from_string(const std::string& text) {
  if (text == "deterministic") return GuaranteeMode::kDeterministic;
  if (text == "probabilistic") return GuaranteeMode::kProbabilistic;
  fail(ErrorKind::kParse, "unknown guarantee mode '" + text + "'");
}

std::string to_string(Verdict verdict) { return verdict == Verdict::kPass ? "pass" : "fail"; }

CertificationReport check_deterministic(double eta, double lipschitz, double eps_max) {
  if (!(eps_max > 0.0)) fail(ErrorKind::kInvalidArgument, "covering radius must be positive");
  if (!(lipschitz >= 0.0)) fail(ErrorKind::kInvalidArgument, "Lipschitz constant must be >= 0");
  if (!std::isfinite(eta)) fail(ErrorKind::kInvalidArgument, "eta must be finite");
  CertificationReport r;
  r.mode = GuaranteeMode::kDeterministic;
  r.eta = eta;
  r.lipschitz = lipschitz;
  r.eps_max = eps_max;
  r.condition_value = lipschitz * eps_max + eta;
  r.verdict = r.condition_value <= 0.0 ? Verdict::kPass : Verdict::kFail;
  r.confidence = 1.0;
  return r;
}

CertificationReport check_probabilistic(double eta, double lipschitz, double phi,
                                        const GeometryFactor& geometry, double beta) {
  if (!(lipschitz >= 0.0)) fail(ErrorKind::kInvalidArgument, "Lipschitz constant must be >= 0");
  if (!(beta >= 0.0 && beta <= 1.0)) fail(ErrorKind::kDomain, "beta must lie in [0, 1]");
  if (!std::isfinite(eta)) fail(ErrorKind::kInvalidArgument, "eta must be finite");
  CertificationReport r;
  r.mode = GuaranteeMode::kProbabilistic;
  r.eta = eta;
  r.lipschitz = lipschitz;
  r.phi = phi;
  r.mu_inv_phi = geometry.mu_inverse(phi);
  r.beta = beta;
  r.condition_value = eta + lipschitz * *r.mu_inv_phi;
  r.verdict = r.condition_value <= 0.0 ? Verdict::kPass : Verdict::kFail;
  r.confidence = 1.0 - beta;
  return r;
}

CertificationReport certify_probabilistic(double eta, double lipschitz, double beta,
                                          std::size_t c, std::size_t sample_count,
                                          const GeometryFactor& geometry) {
  const double phi = min_violation_level(beta, c, sample_count);
  CertificationReport r = check_probabilistic(eta, lipschitz, phi, geometry, beta);
  r.decision_count = c;
  r.sample_count = sample_count;
  return r;
}

double percent_change(double old_value, double new_value) {
  return 100.0 * (new_value - old_value) / std::abs(old_value);
}

}  // namespace physbc
