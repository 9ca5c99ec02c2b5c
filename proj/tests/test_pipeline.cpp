#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "json.hpp"
#include "physbc/error.hpp"
#include "physbc/pipeline.hpp"
#include "physbc/reproduce.hpp"

using namespace physbc;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

RunConfig small_config(GuaranteeMode mode = GuaranteeMode::kDeterministic) {
  RunConfig c = preset_config("supply-demand", mode);
  c.samples = 20000;
  c.validation_trajectories = 50;
  c.validation_horizon = 50;
  c.lipschitz.pair_budget = 20000;
  return c;
}

fs::path temp_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("physbc_pipeline_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string without_timing(const RunReport& r) {
  json j = json::parse(report_to_json(r));
  j.erase("timing");
  return j.dump();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST(Config, RoundTrip) {
  for (const char* name : {"supply-demand", "logistic-growth"}) {
    for (auto mode : {GuaranteeMode::kDeterministic, GuaranteeMode::kProbabilistic}) {
      const RunConfig c = preset_config(name, mode);
      const std::string text = run_config_to_json(c);
      EXPECT_EQ(run_config_to_json(parse_run_config(text)), text);
    }
  }
}

TEST(Config, UnsafeOutsideDomainRejected) {
  json j = json::parse(run_config_to_json(small_config()));
  j["regions"]["Xu"]["upper"] = {3.0};
  try {
    parse_run_config(j.dump()).validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kValidation) << e.what();
  }
}

TEST(Config, ModeSpecificFields) {
  RunConfig c = small_config();
  c.beta = 0.05;
  EXPECT_THROW(c.validate(), Error);
  RunConfig p = small_config(GuaranteeMode::kProbabilistic);
  p.beta.reset();
  EXPECT_THROW(p.validate(), Error);
  EXPECT_THROW(parse_run_config("{not json"), Error);
  EXPECT_THROW(load_run_config("/nonexistent/config.json"), Error);
}

TEST(Config, CustomSystem) {
  const char* text = R"({
    "system": {"custom": {"family": "affine", "dimension": 1, "offset": [0.5], "linear": [0.8]}},
    "regions": {"X": {"lower": [0.5], "upper": [2.7]}, "X0": {"lower": [0.5], "upper": [0.6]},
                "Xu": {"lower": [2.6], "upper": [2.7]}},
    "sampling": {"scheme": "uniform-grid", "count": 1000}
  })";
  const RunConfig c = parse_run_config(text);
  c.validate();
  EXPECT_EQ(c.system_name, "custom");
  EXPECT_NEAR(c.physics.step(std::vector<double>{0.5})[0], 0.9, 1e-15);
  EXPECT_NEAR(c.perturbation_frequency, 1.0 / 2.2, 1e-15);
}

TEST(Pipeline, SmallRunPassesAndIsDeterministic) {
  const RunConfig c = small_config();
  const RunReport a = run_pipeline(c);
  const RunReport b = run_pipeline(c);
  EXPECT_EQ(without_timing(a), without_timing(b));
  EXPECT_TRUE(a.passed());
  EXPECT_EQ(exit_code(a), 0);
  EXPECT_NEAR(a.filter.retention_fraction, 0.5, 0.02);
  EXPECT_EQ(a.assembly.flow_rows, a.filter.retained_count);
  ASSERT_TRUE(a.empirical);
  EXPECT_EQ(a.empirical->violations, 0u);
  const auto re = recertify(a);
  EXPECT_EQ(re.verdict, a.certification.verdict);
  EXPECT_DOUBLE_EQ(re.condition_value, a.certification.condition_value);
  for (const char* stage : {"generate", "filter", "assemble", "solve", "estimate", "certify", "validate"}) {
    EXPECT_TRUE(a.timing_seconds.count(stage)) << stage;
  }
}

TEST(Pipeline, ProbabilisticRecertify) {
  RunConfig c = preset_config("logistic-growth", GuaranteeMode::kProbabilistic);
  c.samples = 30000;
  c.lipschitz.pair_budget = 10000;
  const RunReport r = run_pipeline(c, RunOptions{.empirical_check = false});
  EXPECT_EQ(r.certification.decision_count, std::optional<std::size_t>(6));
  EXPECT_EQ(r.certification.sample_count, std::optional<std::size_t>(r.filter.retained_count));
  EXPECT_NEAR(r.certification.confidence, 0.95, 1e-15);
  const auto re = recertify(r);
  EXPECT_EQ(re.verdict, r.certification.verdict);
  EXPECT_NEAR(re.condition_value, r.certification.condition_value, 1e-15);
}

TEST(Pipeline, CrossCheckAgrees) {
  RunConfig c = preset_config("logistic-growth", GuaranteeMode::kDeterministic);
  c.samples = 5000;
  c.cross_check = true;
  const RunReport r = run_pipeline(c, RunOptions{.empirical_check = false});
  ASSERT_TRUE(r.cross_check);
  EXPECT_LT(r.cross_check->difference, 1e-4);
}

TEST(Pipeline, LowFrequencySurrogateFails) {
  RunConfig c = small_config();
  c.perturbation_frequency = 1.0 / 2.2;
  const RunReport r = run_pipeline(c, RunOptions{.empirical_check = false});
  EXPECT_EQ(r.certification.verdict, Verdict::kFail);
  EXPECT_EQ(exit_code(r), 2);
}

TEST(Pipeline, StageNamedErrors) {
  RunConfig c = small_config(GuaranteeMode::kProbabilistic);
  c.perturbation_amplitude = c.delta * std::sqrt(2.0);
  c.delta = 1e-16;  // nothing survives the filter
  try {
    run_pipeline(c, RunOptions{.empirical_check = false});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("stage '"), std::string::npos) << e.what();
  }
}

TEST(Pipeline, ArtifactsAndPlotData) {
  const fs::path dir = temp_dir("artifacts");
  RunConfig c = small_config();
  c.output_dir = dir;
  const RunReport r = run_pipeline(c);
  for (const char* f : {"report.json", "certificate.json", "dataset.csv", "dataset.csv.json", "retained.csv"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  const Dataset retained = load_dataset(dir / "retained.csv");
  EXPECT_EQ(retained.size(), r.filter.retained_count);
  EXPECT_EQ(dataset_hash(retained), r.retained_hash);

  const StoredReport stored = load_report(dir / "report.json");
  EXPECT_EQ(stored.certificate.q, r.certificate.q);
  EXPECT_EQ(stored.verdict, "pass");
  const auto files = write_plot_data(stored, dir / "plot");
  EXPECT_EQ(files.size(), 4u);

  const auto levels = read_csv(dir / "plot" / "levels.csv");
  ASSERT_EQ(levels.size(), 3u);
  EXPECT_EQ(std::stod(levels[1][1]), r.certificate.alpha);
  EXPECT_EQ(std::stod(levels[2][1]), r.certificate.rho);

  const auto curve = read_csv(dir / "plot" / "barrier_curve.csv");
  std::size_t init = 0, unsafe = 0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const double b = std::stod(curve[i][1]);
    if (curve[i][2] == "initial") {
      EXPECT_LE(b, r.certificate.alpha);
      ++init;
    } else if (curve[i][2] == "unsafe") {
      EXPECT_GE(b, r.certificate.rho);
      ++unsafe;
    }
  }
  EXPECT_GT(init, 0u);
  EXPECT_GT(unsafe, 0u);
  EXPECT_EQ(read_csv(dir / "plot" / "samples.csv").size(), r.filter.input_count + 1);

  const ValidationResult v = validate_certificate(stored, 100, 100, 3);
  EXPECT_TRUE(v.ok());
  EXPECT_TRUE(v.dense_check.levels_ordered);
  EXPECT_FALSE(json::parse(validation_to_json(v)).at("ok").is_null());
}

TEST(Pipeline, TraditionalRunHasNoJumpFile) {
  const fs::path dir = temp_dir("traditional");
  RunConfig c = small_config();
  c.filter_enabled = false;
  c.output_dir = dir;
  c.write_datasets = false;
  run_pipeline(c, RunOptions{.empirical_check = false});
  const auto files = write_plot_data(load_report(dir / "report.json"), dir / "plot");
  EXPECT_EQ(files.size(), 3u);
  EXPECT_FALSE(fs::exists(dir / "plot" / "max_jump.csv"));
  EXPECT_TRUE(fs::exists(dir / "plot" / "barrier_curve.csv"));
  EXPECT_FALSE(fs::exists(dir / "dataset.csv"));
}

TEST(Pipeline, MissingReportIsFileError) {
  try {
    load_report("/nonexistent/report.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kFile);
  }
}

TEST(Sweep, DeltaArcsineLaw) {
  RunConfig c = small_config();
  const double a = c.delta * std::sqrt(2.0);
  const std::vector<double> grid{a / 10, a / 2, a, 2 * a, 1e-16};
  const auto rows = run_sweep(c, SweepParameter::kDelta, grid, 2);
  ASSERT_EQ(rows.size(), grid.size());
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double expected = grid[i] >= a ? 1.0 : 2.0 / std::numbers::pi * std::asin(grid[i] / a);
    EXPECT_NEAR(static_cast<double>(rows[i].retained) / rows[i].samples, expected, 0.01) << grid[i];
    EXPECT_EQ(rows[i].verdict, "pass");
  }
  EXPECT_EQ(rows.back().retained, 0u);
  EXPECT_EQ(rows.back().verdict, "error");
  EXPECT_EQ(rows.back().note.rfind("insufficient-samples", 0), 0u) << rows.back().note;
  const std::string csv = sweep_to_csv(SweepParameter::kDelta, rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "delta,S,P,eta,condition,verdict,note");
}

TEST(Sweep, NestedGridsEtaNonDecreasing) {
  RunConfig c = small_config();
  c.cover_density = 500.0;
  const auto rows = run_sweep(c, SweepParameter::kSamples, {1001, 2001, 4001, 8001}, 1);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ASSERT_TRUE(rows[i].eta && rows[i - 1].eta);
    EXPECT_GE(*rows[i].eta, *rows[i - 1].eta - 1e-9);
  }
}

TEST(Reproduce, PublishedArithmetic) {
  for (const auto& row : published_rows()) {
    EXPECT_NEAR(published_condition(row).condition_value, row.condition, 5e-4) << row.system;
    if (row.eta_change_percent) {
      const auto& base = *std::find_if(published_rows().begin(), published_rows().end(),
                                       [&](const PublishedRow& b) {
                                         return !b.physics_informed && b.system == row.system &&
                                                b.mode == row.mode;
                                       });
      EXPECT_NEAR(percent_change(base.condition, row.condition), *row.condition_change_percent,
                  1.5)
          << row.system;
    }
  }
  EXPECT_EQ(published_rows().size(), 8u);
}
