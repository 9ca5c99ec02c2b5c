#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "physbc/barrier.hpp"
#include "physbc/certify.hpp"
#include "physbc/config.hpp"
#include "physbc/filter.hpp"
#include "physbc/lipschitz.hpp"
#include "physbc/models.hpp"
#include "physbc/solver.hpp"

namespace physbc {

struct FilterSummary {
  bool enabled = false;
  std::size_t input_count = 0;     // S
  std::size_t retained_count = 0;  // P
  double delta = 0.0;
  double retention_fraction = 1.0;
  std::optional<DiscardRun> max_jump;
};

struct AssemblySummary {
  std::size_t initial_rows = 0;
  std::size_t unsafe_rows = 0;
  std::size_t flow_rows = 0;
  double cover_density = 0.0;
  std::vector<std::string> warnings;
};

struct CrossCheck {
  SolveStatus status = SolveStatus::kIterationLimit;
  double eta = 0.0;
  double difference = 0.0;  // |eta_direct - eta_simplex|
};

struct RunReport {
  RunConfig config;
  std::string dataset_hash;
  std::string retained_hash;
  FilterSummary filter;
  AssemblySummary assembly;
  SolveResult solve;
  std::optional<CrossCheck> cross_check;
  BarrierCertificate certificate;
  LipschitzEstimate lipschitz;
  CertificationReport certification;
  std::optional<SafetyReport> empirical;
  std::map<std::string, double> timing_seconds;

  bool passed() const noexcept { return certification.verdict == Verdict::kPass; }
};

struct RunOptions {
  bool empirical_check = true;
};

/// generate -> filter -> assemble -> solve -> estimate -> certify -> validate.
/// Errors are rethrown with the failing stage named in the message.
RunReport run_pipeline(const RunConfig& config, const RunOptions& options = {});

/// Recomputes the certification verdict from the numbers stored in a report.
CertificationReport recertify(const RunReport& report);

/// JSON rendering; timing is kept under its own "timing" key.
std::string report_to_json(const RunReport& report, int indent = 2);
/// The subset of a saved report needed by plotdata/validate.
struct StoredReport {
  RunConfig config;
  BarrierCertificate certificate;
  bool filtered = false;
  std::string verdict;
};
StoredReport load_report(const std::filesystem::path& path);

std::string certificate_to_json(const BarrierCertificate& certificate, const std::string& dataset_hash,
                                double delta, bool filtered, GuaranteeMode mode, int indent = 2);

/// Writes report.json, certificate.json and (optionally) the datasets.
void write_run_artifacts(const RunReport& report, const std::filesystem::path& dir);

/// Exit status contract: 0 pass, 2 fail (1 is reserved for errors).
int exit_code(const RunReport& report);

// ---- sweep ---------------------------------------------------------------

enum class SweepParameter { kDelta, kSamples, kBeta };
SweepParameter sweep_parameter_from_string(const std::string& text);
std::string to_string(SweepParameter parameter);

struct SweepRow {
  double value = 0.0;
  std::size_t samples = 0;
  std::size_t retained = 0;
  std::optional<double> eta;
  std::optional<double> condition;
  std::string verdict;  // pass / fail / error
  std::string note;     // error message or marker
};

std::vector<SweepRow> run_sweep(const RunConfig& base, SweepParameter parameter,
                                const std::vector<double>& grid, std::size_t jobs = 1);
std::string sweep_to_csv(SweepParameter parameter, const std::vector<SweepRow>& rows);

// ---- plot data -----------------------------------------------------------

/// Emits barrier_curve.csv, levels.csv, samples.csv and (filtered runs)
/// max_jump.csv into `dir`. Returns the files written.
std::vector<std::filesystem::path> write_plot_data(const StoredReport& report,
                                                   const std::filesystem::path& dir);

// ---- validate ------------------------------------------------------------

struct ValidationResult {
  SafetyReport empirical;
  CertificateCheck dense_check;  // certificate conditions on dense covers with the true system
  std::size_t dense_points = 0;
  bool ok() const noexcept { return empirical.violations == 0; }
};

ValidationResult validate_certificate(const StoredReport& report, std::size_t trajectories,
                                      std::size_t horizon, std::uint64_t seed);
std::string validation_to_json(const ValidationResult& result, int indent = 2);

}  // namespace physbc
