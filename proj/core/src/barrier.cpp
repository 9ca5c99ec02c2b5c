#include "physbc/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

#include "physbc/error.hpp"

namespace physbc {

BarrierTemplate::BarrierTemplate(std::size_t dim, std::vector<Exponents> basis)
    : dim_(dim), basis_(std::move(basis)) {
  if (dim_ == 0) fail(ErrorKind::kInvalidArgument, "template dimension must be positive");
  if (basis_.empty()) fail(ErrorKind::kInvalidArgument, "template basis is empty");
  std::set<Exponents> seen;
  for (const auto& e : basis_) {
    if (e.size() != dim_) {
      fail(ErrorKind::kInvalidArgument, "monomial exponent vector has the wrong dimension");
    }
    if (!seen.insert(e).second) fail(ErrorKind::kInvalidArgument, "template basis has duplicates");
  }
}

BarrierTemplate BarrierTemplate::full(std::size_t dim, unsigned degree, bool include_constant) {
  std::vector<Exponents> basis;
  Exponents current(dim, 0);
  // Enumerate exponent vectors of a fixed total degree, lexicographically
  // descending.
  std::function<void(std::size_t, unsigned)> emit = [&](std::size_t axis, unsigned left) {
    if (axis + 1 == dim) {
      current[axis] = left;
      basis.push_back(current);
      return;
    }
    for (unsigned e = left + 1; e-- > 0;) {
      current[axis] = e;
      emit(axis + 1, left - e);
    }
  };
  for (unsigned d = degree + 1; d-- > (include_constant ? 0u : 1u);) emit(0, d);
  return BarrierTemplate(dim, std::move(basis));
}

void BarrierTemplate::features(std::span<const double> x, std::span<double> out) const {
  if (x.size() != dim_ || out.size() != basis_.size()) {
    fail(ErrorKind::kInvalidArgument, "template feature dimension mismatch");
  }
  for (std::size_t j = 0; j < basis_.size(); ++j) {
    double v = 1.0;
    for (std::size_t a = 0; a < dim_; ++a) {
      for (unsigned p = 0; p < basis_[j][a]; ++p) v *= x[a];
    }
    out[j] = v;
  }
}

std::vector<double> BarrierTemplate::features(std::span<const double> x) const {
  std::vector<double> out(basis_.size());
  features(x, out);
  return out;
}

double BarrierTemplate::evaluate(std::span<const double> q, std::span<const double> x) const {
  if (q.size() != basis_.size()) {
    fail(ErrorKind::kInvalidArgument, "coefficient vector has " + std::to_string(q.size()) +
                                          " entries, template has " +
                                          std::to_string(basis_.size()));
  }
  const std::vector<double> l = features(x);
  double v = 0.0;
  for (std::size_t j = 0; j < l.size(); ++j) v += q[j] * l[j];
  return v;
}

double evaluate(const BarrierTemplate& tmpl, std::span<const double> q,
                std::span<const double> x) {
  return tmpl.evaluate(q, x);
}

double BarrierCertificate::flow(std::span<const double> x, std::span<const double> fx) const {
  return tmpl.evaluate(q, fx) - kappa * tmpl.evaluate(q, x);
}

void BarrierCertificate::validate_shape() const {
  if (q.size() != tmpl.size()) fail(ErrorKind::kInvalidArgument, "certificate q size mismatch");
  if (!(kappa > 0.0 && kappa <= 1.0)) fail(ErrorKind::kInvalidArgument, "kappa must lie in (0, 1]");
}

std::string to_string(RowTag tag) {
  switch (tag) {
    case RowTag::kInitial: return "initial";
    case RowTag::kUnsafe: return "unsafe";
    case RowTag::kFlow: return "flow";
  }
  return "unknown";
}

void SafetyRegions::validate() const {
  if (initial.dimension() != domain.dimension() || unsafe.dimension() != domain.dimension()) {
    fail(ErrorKind::kValidation, "region dimensions disagree");
  }
  if (!domain.contains(initial)) fail(ErrorKind::kValidation, "initial set is not inside X");
  if (!domain.contains(unsafe)) fail(ErrorKind::kValidation, "unsafe set is not inside X");
}

namespace {

void require_in(const RegionBox& box, std::span<const double> x, const std::string& what,
                std::size_t index) {
  if (!box.contains(x)) {
    fail(ErrorKind::kRegionViolation,
         what + " sample " + std::to_string(index) + " lies outside its declared region");
  }
}

}  // namespace

ConstraintSystem assemble(const BarrierTemplate& tmpl, double kappa, const Dataset& data,
                          std::span<const double> initial_states,
                          std::span<const double> unsafe_states, const SafetyRegions& regions,
                          const AssemblyOptions& options) {
  if (!(kappa > 0.0 && kappa <= 1.0)) fail(ErrorKind::kInvalidArgument, "kappa must lie in (0, 1]");
  regions.validate();
  const std::size_t n = tmpl.dimension();
  if (data.dimension() != n || regions.domain.dimension() != n) {
    fail(ErrorKind::kModelMismatch, "template and data dimensions differ");
  }
  if (initial_states.size() % n != 0 || unsafe_states.size() % n != 0) {
    fail(ErrorKind::kModelMismatch, "constraint sample arrays are not a multiple of the dimension");
  }

  const std::size_t z = tmpl.size();
  const std::size_t vars = z + ConstraintSystem::kFirstCoefficient;
  ConstraintSystem sys{.lp = EpigraphLp(vars), .tmpl = tmpl, .kappa = kappa};
  sys.initial_rows = initial_states.size() / n;
  sys.unsafe_rows = unsafe_states.size() / n;
  sys.flow_rows = data.size();
  const std::size_t total = sys.initial_rows + sys.unsafe_rows + sys.flow_rows;
  sys.lp.coeffs.reserve(total * vars);
  sys.lp.offsets.reserve(total);
  sys.tags.reserve(total);

  std::vector<double> row(vars), lx(z), ly(z);
  for (std::size_t i = 0; i < sys.initial_rows; ++i) {
    auto x = initial_states.subspan(i * n, n);
    require_in(regions.initial, x, "initial-set", i);
    tmpl.features(x, lx);
    std::fill(row.begin(), row.end(), 0.0);
    row[ConstraintSystem::kAlpha] = -1.0;
    std::copy(lx.begin(), lx.end(), row.begin() + ConstraintSystem::kFirstCoefficient);
    sys.lp.add_row(row, 0.0);
    sys.tags.push_back(RowTag::kInitial);
  }
  for (std::size_t i = 0; i < sys.unsafe_rows; ++i) {
    auto x = unsafe_states.subspan(i * n, n);
    require_in(regions.unsafe, x, "unsafe-set", i);
    tmpl.features(x, lx);
    std::fill(row.begin(), row.end(), 0.0);
    row[ConstraintSystem::kRho] = 1.0;
    for (std::size_t j = 0; j < z; ++j) row[ConstraintSystem::kFirstCoefficient + j] = -lx[j];
    sys.lp.add_row(row, 0.0);
    sys.tags.push_back(RowTag::kUnsafe);
  }
  for (std::size_t i = 0; i < sys.flow_rows; ++i) {
    require_in(regions.domain, data.state(i), "flow", i);
    tmpl.features(data.state(i), lx);
    tmpl.features(data.successor(i), ly);
    std::fill(row.begin(), row.end(), 0.0);
    for (std::size_t j = 0; j < z; ++j) {
      row[ConstraintSystem::kFirstCoefficient + j] = ly[j] - kappa * lx[j];
    }
    sys.lp.add_row(row, 0.0);
    sys.tags.push_back(RowTag::kFlow);
  }

  if (sys.initial_rows == 0) sys.warnings.emplace_back("no initial-set samples: condition is vacuous");
  if (sys.unsafe_rows == 0) sys.warnings.emplace_back("no unsafe-set samples: condition is vacuous");
  if (sys.flow_rows == 0) sys.warnings.emplace_back("no data pairs: flow condition is vacuous");

  if (options.bounded) {
    sys.lp.set_bounds(ConstraintSystem::kAlpha, -options.level_bound, options.level_bound);
    sys.lp.set_bounds(ConstraintSystem::kRho, -options.level_bound, options.level_bound);
    for (std::size_t j = 0; j < z; ++j) {
      sys.lp.set_bounds(ConstraintSystem::kFirstCoefficient + j, -options.coefficient_bound,
                        options.coefficient_bound);
    }
  }
  // alpha - rho <= -gap
  std::vector<double> gap(vars, 0.0);
  gap[ConstraintSystem::kAlpha] = 1.0;
  gap[ConstraintSystem::kRho] = -1.0;
  sys.lp.add_cut(std::move(gap), -options.level_gap);
  return sys;
}

BarrierCertificate certificate_from_decision(const BarrierTemplate& tmpl, double kappa,
                                             std::span<const double> decision) {
  if (decision.size() != tmpl.size() + ConstraintSystem::kFirstCoefficient) {
    fail(ErrorKind::kInvalidArgument, "decision vector does not match the template");
  }
  BarrierCertificate cert{.tmpl = tmpl,
                          .q = std::vector<double>(
                              decision.begin() + ConstraintSystem::kFirstCoefficient,
                              decision.end()),
                          .kappa = kappa,
                          .alpha = decision[ConstraintSystem::kAlpha],
                          .rho = decision[ConstraintSystem::kRho]};
  return cert;
}

std::vector<double> cover_states(const RegionBox& box, double density) {
  if (!(density > 0.0)) fail(ErrorKind::kInvalidArgument, "cover density must be positive");
  std::vector<std::size_t> counts(box.dimension());
  for (std::size_t a = 0; a < counts.size(); ++a) {
    counts[a] = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::llround(box.width(a) * density)) + 1);
  }
  return grid_states(box, counts);
}

double CertificateCheck::max_residual() const {
  return std::max({initial_residual, unsafe_residual, flow_residual});
}

bool CertificateCheck::passes(double eta) const {
  return levels_ordered && max_residual() <= eta + tolerance;
}

CertificateCheck check_certificate(const BarrierCertificate& certificate, double tolerance,
                                   const Dataset& data, std::span<const double> initial_states,
                                   std::span<const double> unsafe_states) {
  certificate.validate_shape();
  const std::size_t n = certificate.tmpl.dimension();
  constexpr double kNone = -std::numeric_limits<double>::infinity();
  CertificateCheck check{kNone, kNone, kNone, certificate.levels_ordered(), tolerance};
  for (std::size_t i = 0; i + n <= initial_states.size(); i += n) {
    check.initial_residual =
        std::max(check.initial_residual, certificate(initial_states.subspan(i, n)) - certificate.alpha);
  }
  for (std::size_t i = 0; i + n <= unsafe_states.size(); i += n) {
    check.unsafe_residual =
        std::max(check.unsafe_residual, certificate.rho - certificate(unsafe_states.subspan(i, n)));
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    check.flow_residual =
        std::max(check.flow_residual, certificate.flow(data.state(i), data.successor(i)));
  }
  return check;
}

}  // namespace physbc
