#include "physbc/reproduce.hpp"

#include <cmath>
#include <future>
#include <iomanip>
#include <sstream>

#include "physbc/error.hpp"
#include "physbc/pipeline.hpp"
#include "physbc/sampling.hpp"

namespace physbc {

namespace {

constexpr GuaranteeMode kDet = GuaranteeMode::kDeterministic;
constexpr GuaranteeMode kProb = GuaranteeMode::kProbabilistic;

std::string opt_text(const std::optional<double>& v, int precision = 4) {
  if (!v) return "-";
  std::ostringstream out;
  out << std::setprecision(precision) << *v;
  return out.str();
}

std::string opt_csv(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

}  // namespace

const std::vector<PublishedRow>& published_rows() {
  static const std::vector<PublishedRow> rows = {
      {"supply-demand", kDet, false, 220000, std::nullopt, 5e-6, std::nullopt, 67.90, -0.0235,
       std::nullopt, -0.0231, std::nullopt, 2.2},
      {"supply-demand", kDet, true, 110228, 0.005, 9e-5, std::nullopt, 103.72, -0.0527, -124.0,
       -0.0434, -87.0, 2.2},
      {"supply-demand", kProb, false, 300000, std::nullopt, std::nullopt, 3.1e-5, 11.51, -0.2078,
       std::nullopt, -0.2070, std::nullopt, 2.2},
      {"supply-demand", kProb, true, 150260, 0.005, std::nullopt, 6.18e-5, 11.51, -0.2094, -0.74,
       -0.2078, -0.36, 2.2},
      {"logistic-growth", kDet, false, 90000, std::nullopt, 5e-6, std::nullopt, 25.25, -0.0065,
       std::nullopt, -0.0064, std::nullopt, 0.9},
      {"logistic-growth", kDet, true, 45175, 0.005, 8e-5, std::nullopt, 222.87, -0.0694, -967.0,
       -0.0515, -704.0, 0.9},
      {"logistic-growth", kProb, false, 260000, std::nullopt, std::nullopt, 4.05e-5, 2.9479,
       -6.4189e-4, std::nullopt, -5.3444e-4, std::nullopt, 0.9},
      {"logistic-growth", kProb, true, 130234, 0.005, std::nullopt, 8.08e-5, 5.0397, -0.0021,
       -221.0, -0.0017, -217.0, 0.9},
  };
  return rows;
}

CertificationReport published_condition(const PublishedRow& row) {
  if (row.mode == kDet) return check_deterministic(row.eta, row.lipschitz, row.eps_max.value());
  return check_probabilistic(row.eta, row.lipschitz, row.phi.value(),
                             GeometryFactor::interval(row.interval_length), 0.05);
}

RunConfig reproduction_config(const PublishedRow& row, std::uint64_t seed) {
  RunConfig config = preset_config(row.system, row.mode);
  config.seed = seed;
  config.filter_enabled = row.physics_informed;
  if (row.delta) config.delta = *row.delta;
  config.output_dir.clear();
  return config;
}

std::vector<ReproducedRow> reproduce_table(std::uint64_t seed, std::size_t jobs) {
  const auto& published = published_rows();
  auto run_row = [seed](const PublishedRow& row) {
    ReproducedRow out{.published = row};
    try {
      const RunReport report =
          run_pipeline(reproduction_config(row, seed), RunOptions{.empirical_check = false});
      out.samples = report.filter.retained_count;
      out.eps_max = report.certification.eps_max;
      out.phi = report.certification.phi;
      out.lipschitz = report.lipschitz.l;
      out.eta = report.solve.eta;
      out.condition = report.certification.condition_value;
      out.verdict = to_string(report.certification.verdict);
    } catch (const Error& e) {
      out.verdict = "error";
      out.error = e.what();
    }
    return out;
  };

  std::vector<ReproducedRow> rows(published.size());
  jobs = std::max<std::size_t>(1, jobs);
  for (std::size_t start = 0; start < published.size(); start += jobs) {
    std::vector<std::future<ReproducedRow>> batch;
    const std::size_t stop = std::min(published.size(), start + jobs);
    for (std::size_t i = start; i < stop; ++i) {
      batch.push_back(std::async(jobs == 1 ? std::launch::deferred : std::launch::async, run_row,
                                 std::cref(published[i])));
    }
    for (std::size_t i = start; i < stop; ++i) rows[i] = batch[i - start].get();
  }

  // Percent changes against our own traditional row of the same system and mode.
  for (auto& row : rows) {
    if (!row.published.physics_informed || !row.error.empty()) continue;
    for (const auto& base : rows) {
      if (base.published.physics_informed || base.published.system != row.published.system ||
          base.published.mode != row.published.mode || !base.error.empty()) {
        continue;
      }
      row.eta_change_percent = percent_change(base.eta, row.eta);
      row.condition_change_percent = percent_change(base.condition, row.condition);
    }
  }
  return rows;
}

std::string reproduction_to_text(const std::vector<ReproducedRow>& rows) {
  std::ostringstream out;
  out << std::left << std::setw(16) << "system" << std::setw(14) << "mode" << std::setw(7)
      << "phys" << std::setw(18) << "samples" << std::setw(22) << "eps/phi" << std::setw(20)
      << "L" << std::setw(24) << "eta" << std::setw(24) << "condition" << std::setw(18)
      << "%eta" << std::setw(18) << "%cond" << "verdict\n";
  out << std::string(190, '-') << '\n';
  auto pair = [](const std::string& ours, const std::string& theirs) {
    return ours + " (" + theirs + ")";
  };
  for (const auto& r : rows) {
    const auto& p = r.published;
    const std::optional<double> ours_level = p.mode == kDet ? r.eps_max : r.phi;
    const std::optional<double> published_level = p.mode == kDet ? p.eps_max : p.phi;
    out << std::setw(16) << p.system << std::setw(14) << to_string(p.mode) << std::setw(7)
        << (p.physics_informed ? "yes" : "no") << std::setw(18)
        << pair(std::to_string(r.samples), std::to_string(p.samples)) << std::setw(22)
        << pair(opt_text(ours_level, 3), opt_text(published_level, 3)) << std::setw(20)
        << pair(opt_text(r.lipschitz, 5), opt_text(p.lipschitz, 5)) << std::setw(24)
        << pair(opt_text(r.eta), opt_text(p.eta)) << std::setw(24)
        << pair(opt_text(r.condition), opt_text(p.condition)) << std::setw(18)
        << pair(opt_text(r.eta_change_percent, 3), opt_text(p.eta_change_percent, 3))
        << std::setw(18)
        << pair(opt_text(r.condition_change_percent, 3), opt_text(p.condition_change_percent, 3))
        << r.verdict;
    if (!r.error.empty()) out << "  [" << r.error << ']';
    out << '\n';
  }
  out << "values are ours (published)\n";
  return out.str();
}

std::string reproduction_to_csv(const std::vector<ReproducedRow>& rows) {
  std::ostringstream out;
  out << "system,mode,physics_informed,P,P_published,eps_max,eps_max_published,phi,phi_published,L,L_published,"
         "eta,eta_published,condition,condition_published,eta_change_pct,eta_change_pct_published,"
         "condition_change_pct,condition_change_pct_published,verdict,error\n";
  for (const auto& r : rows) {
    const auto& p = r.published;
    out << p.system << ',' << to_string(p.mode) << ',' << (p.physics_informed ? 1 : 0) << ','
        << r.samples << ',' << p.samples << ',' << opt_csv(r.eps_max) << ',' << opt_csv(p.eps_max)
        << ',' << opt_csv(r.phi) << ',' << opt_csv(p.phi) << ',' << format_double(r.lipschitz)
        << ',' << format_double(p.lipschitz) << ',' << format_double(r.eta) << ','
        << format_double(p.eta) << ',' << format_double(r.condition) << ','
        << format_double(p.condition) << ',' << opt_csv(r.eta_change_percent) << ','
        << opt_csv(p.eta_change_percent) << ',' << opt_csv(r.condition_change_percent) << ','
        << opt_csv(p.condition_change_percent) << ',' << r.verdict << ",\"" << r.error << "\"\n";
  }
  return out.str();
}

}  // namespace physbc
