#include "physbc/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "physbc/error.hpp"
#include "physbc/random.hpp"

namespace physbc {

std::string to_string(LipschitzMethod method) {
  return method == LipschitzMethod::kPairwiseMax ? "pairwise-max" : "extreme-value";
}

LipschitzMethod lipschitz_method_from_string(const std::string& text) {
  if (text == "pairwise-max" || text == "pairwise") return LipschitzMethod::kPairwiseMax;
  if (text == "extreme-value" || text == "evt") return LipschitzMethod::kExtremeValue;
  fail(ErrorKind::kParse, "unknown Lipschitz method '" + text + "'");
}

namespace {

struct SlopeSource {
  std::span<const double> values;
  std::span<const double> states;
  std::size_t dim;

  std::size_t size() const { return values.size(); }

  // Negative when the pair is coincident.
  double slope(std::size_t i, std::size_t j) const {
    double d2 = 0.0;
    for (std::size_t a = 0; a < dim; ++a) {
      const double d = states[i * dim + a] - states[j * dim + a];
      d2 += d * d;
    }
    if (d2 == 0.0) return -1.0;
    return std::abs(values[i] - values[j]) / std::sqrt(d2);
  }
};

SlopeSource make_source(std::span<const double> values, std::span<const double> states,
                        std::size_t dim) {
  if (dim == 0 || states.size() != values.size() * dim) {
    fail(ErrorKind::kInvalidArgument, "slope inputs have inconsistent sizes");
  }
  if (values.size() < 2) fail(ErrorKind::kDegenerateData, "need at least two samples for a slope");
  return {values, states, dim};
}

std::vector<std::size_t> sorted_order_1d(std::span<const double> states) {
  std::vector<std::size_t> order(states.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return states[a] < states[b]; });
  return order;
}

std::pair<std::size_t, std::size_t> random_pair(Rng& rng, std::size_t n) {
  const std::size_t i = rng.index(n);
  std::size_t j = rng.index(n - 1);
  if (j >= i) ++j;
  return {i, j};
}

}  // namespace

double pairwise_max_slope(std::span<const double> values, std::span<const double> states,
                          std::size_t dim, const LipschitzConfig& config,
                          std::size_t* pairs_used) {
  const SlopeSource src = make_source(values, states, dim);
  double best = -1.0;
  std::size_t used = 0;
  auto take = [&](double s) {
    if (s < 0.0) return;
    ++used;
    best = std::max(best, s);
  };
  if (dim == 1 && config.include_neighbours) {
    const auto order = sorted_order_1d(states);
    for (std::size_t p = 1; p < order.size(); ++p) take(src.slope(order[p - 1], order[p]));
  }
  Rng rng(config.seed);
  for (std::size_t b = 0; b < config.pair_budget; ++b) {
    const auto [i, j] = random_pair(rng, src.size());
    take(src.slope(i, j));
  }
  if (used == 0) fail(ErrorKind::kDegenerateData, "all sampled pairs are coincident");
  if (pairs_used) *pairs_used = used;
  return best;
}

double reverse_weibull_location(std::span<const double> maxima) {
  if (maxima.empty()) fail(ErrorKind::kDegenerateData, "no batch maxima to fit");
  const double n = static_cast<double>(maxima.size());
  const double top = *std::max_element(maxima.begin(), maxima.end());
  const double mean = std::accumulate(maxima.begin(), maxima.end(), 0.0) / n;
  double m2 = 0.0, m3 = 0.0;
  for (double m : maxima) {
    const double d = m - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  if (maxima.size() < 3 || m2 <= 1e-24 * std::max(1.0, mean * mean)) return top;
  const double skew = m3 / std::pow(m2, 1.5);

  // M = omega - sigma W with W ~ Weibull(shape, 1); skew(M) = -skew(W).
  auto gam = [](double k, double i) { return std::tgamma(1.0 + i / k); };
  auto weibull_skew = [&](double k) {
    const double g1 = gam(k, 1), g2 = gam(k, 2), g3 = gam(k, 3);
    return (g3 - 3.0 * g1 * g2 + 2.0 * g1 * g1 * g1) / std::pow(g2 - g1 * g1, 1.5);
  };
  // weibull_skew decreases in k; bracket [0.3, 100].
  double lo = 0.3, hi = 100.0;
  const double target = -skew;
  double shape;
  if (target >= weibull_skew(lo)) {
    shape = lo;
  } else if (target <= weibull_skew(hi)) {
    shape = hi;
  } else {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (weibull_skew(mid) > target) lo = mid; else hi = mid;
    }
    shape = 0.5 * (lo + hi);
  }
  const double g1 = gam(shape, 1), g2 = gam(shape, 2);
  const double sigma = std::sqrt(m2 / (g2 - g1 * g1));
  const double omega = mean + sigma * g1;
  return std::max(omega, top);
}

double extreme_value_slope(std::span<const double> values, std::span<const double> states,
                           std::size_t dim, const LipschitzConfig& config, double* observed_max) {
  const SlopeSource src = make_source(values, states, dim);
  if (config.batches == 0 || config.batch_size == 0) {
    fail(ErrorKind::kInvalidArgument, "extreme-value method needs positive batch settings");
  }
  std::vector<std::size_t> order;
  if (dim == 1) order = sorted_order_1d(states);
  const std::size_t window = std::max<std::size_t>(1, config.local_window);
  Rng rng(config.seed);
  std::vector<double> maxima;
  maxima.reserve(config.batches);
  double overall = -1.0;
  for (std::size_t b = 0; b < config.batches; ++b) {
    double batch_max = -1.0;
    for (std::size_t s = 0; s < config.batch_size; ++s) {
      std::size_t i, j;
      if (dim == 1) {
        const std::size_t p = rng.index(src.size());
        const std::size_t off = 1 + rng.index(std::min(window, src.size() - 1));
        std::size_t q = p + off;
        if (q >= src.size()) q = p >= off ? p - off : q % src.size();
        i = order[p];
        j = order[q];
      } else {
        std::tie(i, j) = random_pair(rng, src.size());
      }
      batch_max = std::max(batch_max, src.slope(i, j));
    }
    if (batch_max >= 0.0) {
      maxima.push_back(batch_max);
      overall = std::max(overall, batch_max);
    }
  }
  if (maxima.size() < config.batches / 2 + 1) {
    fail(ErrorKind::kDegenerateData, "too few non-coincident slope observations");
  }
  if (observed_max) *observed_max = overall;
  return reverse_weibull_location(maxima);
}

namespace {

struct CertificateValues {
  std::vector<double> barrier;
  std::vector<double> flow;
};

CertificateValues certificate_values(const BarrierCertificate& certificate, const Dataset& data) {
  certificate.validate_shape();
  if (certificate.tmpl.dimension() != data.dimension()) {
    fail(ErrorKind::kModelMismatch, "certificate and data dimensions differ");
  }
  if (data.size() < 2) fail(ErrorKind::kDegenerateData, "need at least two data pairs");
  CertificateValues v;
  v.barrier.resize(data.size());
  v.flow.resize(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    v.barrier[i] = certificate(data.state(i));
    v.flow[i] = certificate(data.successor(i)) - certificate.kappa * v.barrier[i];
  }
  return v;
}

}  // namespace

LipschitzEstimate estimate_pairwise(const BarrierCertificate& certificate, const Dataset& data,
                                    const LipschitzConfig& config) {
  if (!(config.safety_multiplier >= 1.0)) {
    fail(ErrorKind::kInvalidArgument, "safety multiplier must be >= 1");
  }
  const CertificateValues v = certificate_values(certificate, data);
  std::size_t used1 = 0, used2 = 0;
  const double s1 = pairwise_max_slope(v.barrier, data.states(), data.dimension(), config, &used1);
  const double s2 = pairwise_max_slope(v.flow, data.states(), data.dimension(), config, &used2);
  LipschitzEstimate est;
  est.method = LipschitzMethod::kPairwiseMax;
  est.safety_multiplier = config.safety_multiplier;
  est.l1 = config.safety_multiplier * s1;
  est.l2 = config.safety_multiplier * s2;
  est.l = std::max(est.l1, est.l2);
  est.samples_used = used1 + used2;
  est.max_observed_slope = std::max(s1, s2);
  return est;
}

LipschitzEstimate estimate_extreme_value(const BarrierCertificate& certificate,
                                         const Dataset& data, const LipschitzConfig& config) {
  const CertificateValues v = certificate_values(certificate, data);
  double obs1 = 0.0, obs2 = 0.0;
  LipschitzEstimate est;
  est.method = LipschitzMethod::kExtremeValue;
  est.safety_multiplier = 1.0;
  est.l1 = extreme_value_slope(v.barrier, data.states(), data.dimension(), config, &obs1);
  est.l2 = extreme_value_slope(v.flow, data.states(), data.dimension(), config, &obs2);
  est.l = std::max(est.l1, est.l2);
  est.samples_used = 2 * config.batches * config.batch_size;
  est.max_observed_slope = std::max(obs1, obs2);
  return est;
}

LipschitzEstimate estimate_lipschitz(const BarrierCertificate& certificate, const Dataset& data,
                                     const LipschitzConfig& config) {
  return config.method == LipschitzMethod::kPairwiseMax
             ? estimate_pairwise(certificate, data, config)
             : estimate_extreme_value(certificate, data, config);
}

}  // namespace physbc
