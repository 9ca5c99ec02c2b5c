#include "physbc/pipeline.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>

#include "json.hpp"
#include "physbc/error.hpp"
#include "physbc/sampling.hpp"

namespace physbc {

using nlohmann::json;

namespace {

template <class F>
auto run_stage(RunReport& report, const char* name, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  try {
    auto out = body();
    report.timing_seconds[name] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("stage '") + name + "': " + e.message());
  }
}

Dataset generate(const RunConfig& config, const SystemModel& truth) {
  const RegionBox& domain = config.regions.domain;
  const std::size_t n = domain.dimension();
  if (config.scheme == SamplingScheme::kIidUniform) {
    return sample_iid(truth, domain, config.samples, config.seed);
  }
  std::vector<std::size_t> counts = config.grid_counts;
  if (counts.empty()) {
    const auto per_axis = static_cast<std::size_t>(
        std::llround(std::pow(static_cast<double>(config.samples), 1.0 / static_cast<double>(n))));
    counts.assign(n, std::max<std::size_t>(2, per_axis));
  }
  return sample_grid(truth, domain, counts);
}

double default_cover_density(const RunConfig& config, std::size_t sample_count) {
  if (config.cover_density) return *config.cover_density;
  const RegionBox& domain = config.regions.domain;
  const double n = static_cast<double>(domain.dimension());
  return std::pow(static_cast<double>(sample_count) / domain.volume(), 1.0 / n);
}

}  // namespace

RunReport run_pipeline(const RunConfig& config, const RunOptions& options) {
  config.validate();
  const BarrierTemplate tmpl = config.barrier_template();
  RunReport report{.config = config,
                   .certificate = BarrierCertificate{.tmpl = tmpl,
                                                     .q = std::vector<double>(tmpl.size(), 0.0),
                                                     .kappa = config.kappa}};
  const SystemModel truth = config.true_system();

  const Dataset dataset = run_stage(report, "generate", [&] { return generate(config, truth); });
  report.dataset_hash = dataset_hash(dataset);

  const Dataset retained = run_stage(report, "filter", [&] {
    report.filter.enabled = config.filter_enabled;
    report.filter.input_count = dataset.size();
    report.filter.delta = config.delta;
    if (!config.filter_enabled) {
      report.filter.retained_count = dataset.size();
      report.filter.retention_fraction = 1.0;
      return dataset;
    }
    FilterOutcome outcome = apply_filter(dataset, config.physics, FilterConfig{config.delta});
    report.filter.retained_count = outcome.retained_count;
    report.filter.retention_fraction = outcome.retention_fraction();
    report.filter.max_jump = max_discard_run(dataset, outcome.kept);
    return std::move(outcome.retained);
  });
  report.retained_hash = dataset_hash(retained);

  if (!config.output_dir.empty() && config.write_datasets) {
    std::filesystem::create_directories(config.output_dir);
    save_dataset(dataset, config.output_dir / "dataset.csv");
    if (config.filter_enabled) save_dataset(retained, config.output_dir / "retained.csv");
  }

  const ConstraintSystem system = run_stage(report, "assemble", [&] {
    const double density = default_cover_density(config, dataset.size());
    const std::vector<double> x0 = cover_states(config.regions.initial, density);
    const std::vector<double> xu = cover_states(config.regions.unsafe, density);
    ConstraintSystem sys =
        assemble(tmpl, config.kappa, retained, x0, xu, config.regions, config.assembly);
    report.assembly = AssemblySummary{sys.initial_rows, sys.unsafe_rows, sys.flow_rows, density,
                                      sys.warnings};
    return sys;
  });

  report.solve = run_stage(report, "solve", [&] {
    SolveResult result = solve(system.lp, config.solver);
    if (result.status == SolveStatus::kUnbounded) {
      fail(ErrorKind::kValidation, "scenario program is unbounded; enable the coefficient box");
    }
    if (result.status != SolveStatus::kOptimal) {
      fail(ErrorKind::kInternal, "scenario program finished with status " + to_string(result.status));
    }
    if (config.cross_check) {
      const SolveResult direct = solve_minmax_direct(system.lp, config.solver);
      report.cross_check = CrossCheck{direct.status, direct.eta, std::abs(direct.eta - result.eta)};
    }
    return result;
  });
  report.certificate = certificate_from_decision(tmpl, config.kappa, report.solve.decision);

  report.lipschitz = run_stage(report, "estimate", [&] {
    return estimate_lipschitz(report.certificate, retained, config.lipschitz);
  });

  report.certification = run_stage(report, "certify", [&] {
    if (config.mode == GuaranteeMode::kDeterministic) {
      const double eps = covering_radius(retained.states(), config.regions.domain);
      return check_deterministic(report.solve.eta, report.lipschitz.l, eps);
    }
    return certify_probabilistic(report.solve.eta, report.lipschitz.l, *config.beta,
                                 config.effective_decision_count(), retained.size(),
                                 *config.geometry());
  });

  if (options.empirical_check) {
    report.empirical = run_stage(report, "validate", [&] {
      return check_safety_empirically(truth, config.regions.initial, config.regions.unsafe,
                                      config.validation_trajectories, config.validation_horizon,
                                      config.validation_seed);
    });
  }

  if (!config.output_dir.empty()) write_run_artifacts(report, config.output_dir);
  return report;
}

CertificationReport recertify(const RunReport& report) {
  const CertificationReport& c = report.certification;
  if (c.mode == GuaranteeMode::kDeterministic) {
    return check_deterministic(c.eta, c.lipschitz, c.eps_max.value());
  }
  CertificationReport r =
      check_probabilistic(c.eta, c.lipschitz, c.phi.value(), *report.config.geometry(), c.beta.value());
  r.decision_count = c.decision_count;
  r.sample_count = c.sample_count;
  return r;
}

int exit_code(const RunReport& report) { return report.passed() ? 0 : 2; }

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
json opt(const std::optional<std::size_t>& v) { return v ? json(*v) : json(nullptr); }

json basis_json(const BarrierTemplate& tmpl) {
  json basis = json::array();
  for (const auto& e : tmpl.basis()) basis.push_back(e);
  return basis;
}

json certificate_json(const BarrierCertificate& cert) {
  return {{"dimension", cert.tmpl.dimension()},
          {"basis", basis_json(cert.tmpl)},
          {"q", cert.q},
          {"kappa", cert.kappa},
          {"alpha", cert.alpha},
          {"rho", cert.rho}};
}

BarrierCertificate certificate_from_json(const json& j) {
  std::vector<Exponents> basis;
  for (const auto& e : j.at("basis")) basis.push_back(e.get<Exponents>());
  BarrierCertificate cert{.tmpl = BarrierTemplate(j.at("dimension").get<std::size_t>(), basis),
                          .q = j.at("q").get<std::vector<double>>(),
                          .kappa = j.at("kappa").get<double>(),
                          .alpha = j.at("alpha").get<double>(),
                          .rho = j.at("rho").get<double>()};
  cert.validate_shape();
  return cert;
}

json run_json(const DiscardRun& run) {
  return {{"length", run.length}, {"lower", run.lower}, {"upper", run.upper}};
}

}  // namespace

std::string certificate_to_json(const BarrierCertificate& certificate, const std::string& hash,
                                double delta, bool filtered, GuaranteeMode mode, int indent) {
  json j = certificate_json(certificate);
  j["provenance"] = {{"dataset_hash", hash},
                     {"delta", filtered ? json(delta) : json(nullptr)},
                     {"filtered", filtered},
                     {"mode", to_string(mode)}};
  return j.dump(indent);
}

std::string report_to_json(const RunReport& r, int indent) {
  json root;
  root["config"] = json::parse(run_config_to_json(r.config));
  root["dataset"] = {{"scheme", to_string(r.config.scheme)},
                     {"count", r.filter.input_count},
                     {"hash", r.dataset_hash},
                     {"retained_hash", r.retained_hash}};
  root["filter"] = {{"enabled", r.filter.enabled},
                    {"S", r.filter.input_count},
                    {"P", r.filter.retained_count},
                    {"delta", r.filter.enabled ? json(r.filter.delta) : json(nullptr)},
                    {"retention_fraction", r.filter.retention_fraction},
                    {"max_jump", r.filter.max_jump ? run_json(*r.filter.max_jump) : json(nullptr)}};
  root["assembly"] = {{"initial_rows", r.assembly.initial_rows},
                      {"unsafe_rows", r.assembly.unsafe_rows},
                      {"flow_rows", r.assembly.flow_rows},
                      {"cover_density", r.assembly.cover_density},
                      {"warnings", r.assembly.warnings}};
  std::vector<std::size_t> active_head(
      r.solve.active_rows.begin(),
      r.solve.active_rows.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(20, r.solve.active_rows.size())));
  root["solve"] = {{"status", to_string(r.solve.status)},
                   {"eta", r.solve.eta},
                   {"decision", r.solve.decision},
                   {"iterations", r.solve.iterations},
                   {"active_row_count", r.solve.active_rows.size()},
                   {"active_rows_head", active_head}};
  if (r.cross_check) {
    root["cross_check"] = {{"status", to_string(r.cross_check->status)},
                           {"eta", r.cross_check->eta},
                           {"difference", r.cross_check->difference}};
  } else {
    root["cross_check"] = nullptr;
  }
  root["certificate"] = certificate_json(r.certificate);
  root["certificate"]["provenance"] = {{"dataset_hash", r.retained_hash},
                                       {"delta", r.filter.enabled ? json(r.filter.delta) : json(nullptr)},
                                       {"filtered", r.filter.enabled},
                                       {"mode", to_string(r.config.mode)}};
  root["lipschitz"] = {{"L1", r.lipschitz.l1},
                       {"L2", r.lipschitz.l2},
                       {"L", r.lipschitz.l},
                       {"method", to_string(r.lipschitz.method)},
                       {"samples_used", r.lipschitz.samples_used},
                       {"safety_multiplier", r.lipschitz.safety_multiplier},
                       {"max_observed_slope", r.lipschitz.max_observed_slope},
                       {"statistical", true}};
  const CertificationReport& c = r.certification;
  root["certification"] = {{"mode", to_string(c.mode)},
                           {"eta", c.eta},
                           {"L", c.lipschitz},
                           {"eps_max", opt(c.eps_max)},
                           {"phi", opt(c.phi)},
                           {"mu_inv_phi", opt(c.mu_inv_phi)},
                           {"c", opt(c.decision_count)},
                           {"P", opt(c.sample_count)},
                           {"beta", opt(c.beta)},
                           {"condition_value", c.condition_value},
                           {"verdict", to_string(c.verdict)},
                           {"confidence", c.confidence}};
  if (r.empirical) {
    json violation = nullptr;
    if (r.empirical->first_violation) {
      violation = {{"trajectory", r.empirical->first_violation->trajectory},
                   {"step", r.empirical->first_violation->step},
                   {"states", r.empirical->first_violation->states}};
    }
    root["empirical"] = {{"trajectories", r.empirical->trajectories},
                         {"horizon", r.empirical->horizon},
                         {"violations", r.empirical->violations},
                         {"first_violation", violation}};
  } else {
    root["empirical"] = nullptr;
  }
  root["timing"] = r.timing_seconds;
  return root.dump(indent);
}

StoredReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kFile, "cannot read report " + path.string());
  try {
    json root = json::parse(in);
    StoredReport stored{.config = parse_run_config(root.at("config").dump()),
                        .certificate = certificate_from_json(root.at("certificate")),
                        .filtered = root.at("filter").at("enabled").get<bool>(),
                        .verdict = root.at("certification").at("verdict").get<std::string>()};
    return stored;
  } catch (const json::exception& e) {
    fail(ErrorKind::kParse, path.string() + ": " + e.what());
  }
}

void write_run_artifacts(const RunReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / "report.json");
  if (!out) fail(ErrorKind::kFile, "cannot write " + (dir / "report.json").string());
  out << report_to_json(report) << '\n';
  std::ofstream cert(dir / "certificate.json");
  if (!cert) fail(ErrorKind::kFile, "cannot write " + (dir / "certificate.json").string());
  cert << certificate_to_json(report.certificate, report.retained_hash, report.filter.delta,
                              report.filter.enabled, report.config.mode)
       << '\n';
}

// ---- sweep ---------------------------------------------------------------

SweepParameter sweep_parameter_from_string(const std::string& text) {
  if (text == "delta") return SweepParameter::kDelta;
  if (text == "S" || text == "samples") return SweepParameter::kSamples;
  if (text == "beta") return SweepParameter::kBeta;
  fail(ErrorKind::kParse, "unknown sweep parameter '" + text + "' (delta | S | beta)");
}

std::string to_string(SweepParameter parameter) {
  switch (parameter) {
    case SweepParameter::kDelta: return "delta";
    case SweepParameter::kSamples: return "S";
    case SweepParameter::kBeta: return "beta";
  }
  return "unknown";
}

namespace {

SweepRow sweep_point(RunConfig config, SweepParameter parameter, double value) {
  SweepRow row{.value = value};
  try {
    switch (parameter) {
      case SweepParameter::kDelta:
        // Hold the surrogate fixed while the threshold moves.
        config.perturbation_amplitude = config.perturbation_amplitude.value_or(config.delta * std::sqrt(2.0));
        config.delta = value;
        config.filter_enabled = true;
        break;
      case SweepParameter::kSamples:
        config.samples = static_cast<std::size_t>(std::llround(value));
        config.grid_counts.clear();
        break;
      case SweepParameter::kBeta:
        if (config.mode != GuaranteeMode::kProbabilistic) {
          fail(ErrorKind::kValidation, "beta sweep needs a probabilistic config");
        }
        config.beta = value;
        break;
    }
    config.output_dir.clear();
    const RunReport report = run_pipeline(config, RunOptions{.empirical_check = false});
    row.samples = report.filter.input_count;
    row.retained = report.filter.retained_count;
    row.eta = report.solve.eta;
    row.condition = report.certification.condition_value;
    row.verdict = to_string(report.certification.verdict);
  } catch (const Error& e) {
    row.verdict = "error";
    row.note = e.kind() == ErrorKind::kInsufficientSamples || e.kind() == ErrorKind::kNoCover ||
                       e.kind() == ErrorKind::kDegenerateData
                   ? "insufficient-samples: " + std::string(e.what())
                   : e.what();
    if (parameter == SweepParameter::kDelta && config.filter_enabled) {
      // Report S and P even when a later stage fails.
      const SystemModel truth = config.true_system();
      const Dataset data = generate(config, truth);
      const FilterOutcome outcome = apply_filter(data, config.physics, FilterConfig{config.delta});
      row.samples = data.size();
      row.retained = outcome.retained_count;
    }
  }
  return row;
}

// Shortest text that parses back to the same double.
std::string shortest(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& text) {
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::vector<SweepRow> run_sweep(const RunConfig& base, SweepParameter parameter,
                                const std::vector<double>& grid, std::size_t jobs) {
  base.validate();
  std::vector<SweepRow> rows(grid.size());
  jobs = std::max<std::size_t>(1, jobs);
  for (std::size_t start = 0; start < grid.size(); start += jobs) {
    std::vector<std::future<SweepRow>> batch;
    const std::size_t stop = std::min(grid.size(), start + jobs);
    for (std::size_t i = start; i < stop; ++i) {
      batch.push_back(std::async(jobs == 1 ? std::launch::deferred : std::launch::async,
                                 sweep_point, base, parameter, grid[i]));
    }
    for (std::size_t i = start; i < stop; ++i) rows[i] = batch[i - start].get();
  }
  return rows;
}

std::string sweep_to_csv(SweepParameter parameter, const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << to_string(parameter) << ",S,P,eta,condition,verdict,note\n";
  for (const auto& r : rows) {
    out << shortest(r.value) << ',' << r.samples << ',' << r.retained << ','
        << (r.eta ? format_double(*r.eta) : "") << ','
        << (r.condition ? format_double(*r.condition) : "") << ',' << r.verdict << ','
        << (r.note.empty() ? "" : csv_field(r.note)) << '\n';
  }
  return out.str();
}

// ---- plot data -----------------------------------------------------------

std::vector<std::filesystem::path> write_plot_data(const StoredReport& report,
                                                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const RunConfig& config = report.config;
  const BarrierCertificate& cert = report.certificate;
  const RegionBox& domain = config.regions.domain;
  const std::size_t n = domain.dimension();
  std::vector<std::filesystem::path> written;

  auto open = [&](const char* name) {
    written.push_back(dir / name);
    std::ofstream f(written.back());
    if (!f) fail(ErrorKind::kFile, "cannot write " + written.back().string());
    return f;
  };
  auto header = [n](std::ofstream& f) {
    for (std::size_t a = 0; a < n; ++a) f << (a ? "," : "") << "x_" << a + 1;
  };

  {
    std::ofstream f = open("barrier_curve.csv");
    header(f);
    f << ",B,region\n";
    const std::size_t per_axis = n == 1 ? 2001 : 101;
    const std::vector<double> pts = grid_states(domain, std::vector<std::size_t>(n, per_axis));
    for (std::size_t i = 0; i < pts.size(); i += n) {
      std::span<const double> x(pts.data() + i, n);
      const char* region = config.regions.initial.contains(x)  ? "initial"
                           : config.regions.unsafe.contains(x) ? "unsafe"
                                                               : "other";
      for (std::size_t a = 0; a < n; ++a) f << (a ? "," : "") << format_double(x[a]);
      f << ',' << format_double(cert(x)) << ',' << region << '\n';
    }
  }
  {
    std::ofstream f = open("levels.csv");
    f << "level,value\n";
    f << "alpha," << format_double(cert.alpha) << '\n';
    f << "rho," << format_double(cert.rho) << '\n';
  }

  const SystemModel truth = config.true_system();
  const Dataset data = generate(config, truth);
  const std::vector<double> disc = discrepancies(data, config.physics);
  std::vector<bool> kept(data.size(), true);
  if (report.filtered) {
    for (std::size_t i = 0; i < kept.size(); ++i) kept[i] = disc[i] <= config.delta;
  }
  {
    std::ofstream f = open("samples.csv");
    header(f);
    f << ",discrepancy,retained\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
      auto x = data.state(i);
      for (std::size_t a = 0; a < n; ++a) f << (a ? "," : "") << format_double(x[a]);
      f << ',' << format_double(disc[i]) << ',' << (kept[i] ? 1 : 0) << '\n';
    }
  }
  if (report.filtered) {
    std::ofstream f = open("max_jump.csv");
    f << "bound";
    for (std::size_t a = 0; a < n; ++a) f << ",x_" << a + 1;
    f << ",length\n";
    if (const auto run = max_discard_run(data, kept)) {
      f << "lower";
      for (double v : run->lower) f << ',' << format_double(v);
      f << ',' << run->length << '\n';
      f << "upper";
      for (double v : run->upper) f << ',' << format_double(v);
      f << ',' << run->length << '\n';
    }
  }
  return written;
}

// ---- validate ------------------------------------------------------------

ValidationResult validate_certificate(const StoredReport& report, std::size_t trajectories,
                                      std::size_t horizon, std::uint64_t seed) {
  const RunConfig& config = report.config;
  const SystemModel truth = config.true_system();
  ValidationResult result{
      .empirical = check_safety_empirically(truth, config.regions.initial, config.regions.unsafe,
                                            trajectories, horizon, seed),
      .dense_check = {}};
  const std::size_t n = config.regions.domain.dimension();
  const std::size_t per_axis = n == 1 ? 20001 : 201;
  const std::vector<std::size_t> counts(n, per_axis);
  const Dataset dense = sample_grid(truth, config.regions.domain, counts);
  const std::vector<double> x0 = grid_states(config.regions.initial, counts);
  const std::vector<double> xu = grid_states(config.regions.unsafe, counts);
  result.dense_check = check_certificate(report.certificate, 0.0, dense, x0, xu);
  result.dense_points = dense.size() + x0.size() / n + xu.size() / n;
  return result;
}

std::string validation_to_json(const ValidationResult& r, int indent) {
  json violation = nullptr;
  if (r.empirical.first_violation) {
    violation = {{"trajectory", r.empirical.first_violation->trajectory},
                 {"step", r.empirical.first_violation->step},
                 {"states", r.empirical.first_violation->states}};
  }
  json root{{"empirical", {{"trajectories", r.empirical.trajectories},
                           {"horizon", r.empirical.horizon},
                           {"violations", r.empirical.violations},
                           {"first_violation", violation}}},
            {"dense_check", {{"points", r.dense_points},
                             {"initial_residual", r.dense_check.initial_residual},
                             {"unsafe_residual", r.dense_check.unsafe_residual},
                             {"flow_residual", r.dense_check.flow_residual},
                             {"levels_ordered", r.dense_check.levels_ordered}}},
            {"ok", r.ok()}};
  return root.dump(indent);
}

}  // namespace physbc
