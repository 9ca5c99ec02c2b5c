// physbc: run, reproduce, sweep, plotdata, validate.
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "physbc/error.hpp"
#include "physbc/pipeline.hpp"
#include "physbc/reproduce.hpp"

namespace fs = std::filesystem;
using namespace physbc;

namespace {

struct Common {
  std::string config_path;
  std::string preset = "supply-demand";
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string mode;
  bool no_filter = false;
  std::size_t jobs = 1;
};

void add_common(CLI::App* cmd, Common& c, bool with_config) {
  if (with_config) {
    cmd->add_option("--config", c.config_path, "JSON run configuration");
    cmd->add_option("--preset", c.preset, "preset used when --config is absent")
        ->check(CLI::IsMember({"supply-demand", "logistic-growth", "logistic"}));
    cmd->add_option("--mode", c.mode, "deterministic | probabilistic")
        ->check(CLI::IsMember({"deterministic", "probabilistic"}));
    cmd->add_flag("--no-filter", c.no_filter, "disable the physics filter (traditional run)");
  }
  cmd->add_option("--seed", c.seed, "sampling seed");
  cmd->add_option("--out", c.out, "output path");
  cmd->add_option("--jobs", c.jobs, "parallel workers")->check(CLI::PositiveNumber);
}

RunConfig resolve_config(const Common& c) {
  RunConfig config;
  if (!c.config_path.empty()) {
    config = load_run_config(c.config_path);
    if (!c.mode.empty()) {
      const GuaranteeMode mode = guarantee_mode_from_string(c.mode);
      if (mode != config.mode) {
        config.mode = mode;
        if (mode == GuaranteeMode::kProbabilistic && !config.beta) config.beta = 0.05;
        if (mode == GuaranteeMode::kDeterministic) config.beta.reset();
      }
    }
  } else {
    const GuaranteeMode mode =
        c.mode.empty() ? GuaranteeMode::kDeterministic : guarantee_mode_from_string(c.mode);
    config = preset_config(c.preset, mode);
  }
  if (c.seed) config.seed = *c.seed;
  if (c.no_filter) config.filter_enabled = false;
  return config;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) fail(ErrorKind::kFile, "cannot write " + path.string());
  out << text;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      grid.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorKind::kParse, "bad grid value '" + item + "'");
    }
  }
  if (grid.empty()) fail(ErrorKind::kParse, "empty grid");
  return grid;
}

int cmd_run(const Common& c) {
  RunConfig config = resolve_config(c);
  if (!c.out.empty()) config.output_dir = c.out;
  const RunReport report = run_pipeline(config);
  if (c.out.empty()) {
    std::cout << report_to_json(report) << '\n';
  } else {
    const auto& cert = report.certification;
    std::cerr << config.system_name << ' ' << to_string(cert.mode) << ": S="
              << report.filter.input_count << " P=" << report.filter.retained_count
              << " eta=" << report.solve.eta << " L=" << report.lipschitz.l
              << " condition=" << cert.condition_value << " -> " << to_string(cert.verdict)
              << "\nwrote " << (fs::path(c.out) / "report.json").string() << '\n';
  }
  return exit_code(report);
}

int cmd_reproduce(const Common& c) {
  const auto rows = reproduce_table(c.seed.value_or(1), c.jobs);
  const std::string text = reproduction_to_text(rows);
  std::cout << text;
  if (!c.out.empty()) {
    write_text(fs::path(c.out) / "reproduction.csv", reproduction_to_csv(rows));
    write_text(fs::path(c.out) / "reproduction.txt", text);
  }
  return 0;
}

int cmd_sweep(const Common& c, const std::string& param, const std::string& grid_text) {
  const RunConfig config = resolve_config(c);
  const SweepParameter parameter = sweep_parameter_from_string(param);
  const auto rows = run_sweep(config, parameter, parse_grid(grid_text), c.jobs);
  const std::string csv = sweep_to_csv(parameter, rows);
  if (c.out.empty()) {
    std::cout << csv;
  } else {
    write_text(c.out, csv);
  }
  return 0;
}

int cmd_plotdata(const Common& c, const std::string& report_path) {
  const StoredReport report = load_report(report_path);
  const fs::path dir = c.out.empty() ? fs::path(report_path).parent_path() / "plot" : fs::path(c.out);
  for (const auto& file : write_plot_data(report, dir)) std::cout << file.string() << '\n';
  return 0;
}

int cmd_validate(const Common& c, const std::string& report_path, std::size_t trajectories,
                 std::size_t horizon) {
  const StoredReport report = load_report(report_path);
  const ValidationResult result = validate_certificate(
      report, trajectories, horizon, c.seed.value_or(report.config.validation_seed));
  const std::string text = validation_to_json(result);
  if (c.out.empty()) {
    std::cout << text << '\n';
  } else {
    write_text(c.out, text + "\n");
  }
  return result.ok() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Physics-informed scenario-optimization barrier certificates"};
  app.require_subcommand(1);

  Common common;
  auto* run = app.add_subcommand("run", "run the full pipeline on one configuration");
  add_common(run, common, true);

  auto* reproduce = app.add_subcommand("reproduce", "rerun the eight published comparison rows");
  add_common(reproduce, common, false);

  std::string param = "delta";
  std::string grid;
  auto* sweep = app.add_subcommand("sweep", "one pipeline per grid value, CSV output");
  add_common(sweep, common, true);
  sweep->add_option("--param", param, "delta | S | beta")->check(CLI::IsMember({"delta", "S", "samples", "beta"}));
  sweep->add_option("--grid", grid, "comma separated values")->required();

  std::string report_path;
  auto* plotdata = app.add_subcommand("plotdata", "CSV files for plotting a saved run");
  add_common(plotdata, common, false);
  plotdata->add_option("report", report_path, "report.json")->required();

  std::size_t trajectories = 1000;
  std::size_t horizon = 500;
  auto* validate = app.add_subcommand("validate", "simulate the true system against a certificate");
  add_common(validate, common, false);
  validate->add_option("report", report_path, "report.json")->required();
  validate->add_option("--trajectories", trajectories);
  validate->add_option("--horizon", horizon);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) return cmd_run(common);
    if (*reproduce) return cmd_reproduce(common);
    if (*sweep) return cmd_sweep(common, param, grid);
    if (*plotdata) return cmd_plotdata(common, report_path);
    if (*validate) return cmd_validate(common, report_path, trajectories, horizon);
  } catch (const std::exception& e) {
    std::cerr << "physbc: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
