#include "physbc/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "physbc/error.hpp"

namespace physbc {

using nlohmann::json;

SystemModel RunConfig::true_system() const {
  if (!perturbation_enabled) return physics;
  PerturbationField field{
      .amplitude = perturbation_amplitude.value_or(delta * std::sqrt(2.0)),
      .frequency = perturbation_frequency,
      .phase = perturbation_phase,
  };
  return physics.with_perturbation(field);
}

BarrierTemplate RunConfig::barrier_template() const {
  return BarrierTemplate::full(physics.dimension(), template_degree, template_constant);
}

std::size_t RunConfig::effective_decision_count() const {
  return decision_count.value_or(barrier_template().size() + 3);
}

std::optional<GeometryFactor> RunConfig::geometry() const {
  const RegionBox& x = regions.domain;
  if (x.dimension() == 1) return GeometryFactor::interval(x.width(0));
  if (x.dimension() == 2) return GeometryFactor::rectangle(x.width(0), x.width(1));
  return std::nullopt;
}

void RunConfig::validate() const {
  regions.validate();
  if (physics.dimension() != regions.domain.dimension()) {
    fail(ErrorKind::kValidation, "system dimension does not match the regions");
  }
  if (samples == 0 && grid_counts.empty()) fail(ErrorKind::kValidation, "sample count must be positive");
  if (!grid_counts.empty() && grid_counts.size() != physics.dimension()) {
    fail(ErrorKind::kValidation, "grid_counts needs one entry per axis");
  }
  if (!(delta > 0.0)) fail(ErrorKind::kValidation, "delta must be positive");
  if (!(kappa > 0.0 && kappa <= 1.0)) fail(ErrorKind::kValidation, "kappa must lie in (0, 1]");
  if (template_degree == 0) fail(ErrorKind::kValidation, "template degree must be at least 1");
  if (mode == GuaranteeMode::kProbabilistic) {
    if (!beta) fail(ErrorKind::kValidation, "probabilistic mode requires beta");
    if (!(*beta > 0.0 && *beta < 1.0)) fail(ErrorKind::kValidation, "beta must lie in (0, 1)");
    if (!geometry()) {
      fail(ErrorKind::kValidation, "probabilistic mode supports 1-D and 2-D state spaces only");
    }
  } else if (beta) {
    fail(ErrorKind::kValidation, "beta is only meaningful in probabilistic mode");
  }
  if (decision_count && *decision_count == 0) fail(ErrorKind::kValidation, "c must be positive");
  if (cover_density && !(*cover_density > 0.0)) fail(ErrorKind::kValidation, "cover density must be positive");
  if (perturbation_enabled) {
    PerturbationField{perturbation_amplitude.value_or(delta * std::sqrt(2.0)),
                      perturbation_frequency, perturbation_phase}
        .validate();
  }
  if (validation_trajectories == 0 || validation_horizon == 0) {
    fail(ErrorKind::kValidation, "validation trajectories and horizon must be positive");
  }
}

RunConfig preset_config(const std::string& name, GuaranteeMode mode) {
  const Preset preset = preset_by_name(name);
  RunConfig c;
  c.system_name = preset.name;
  c.physics = preset.physics;
  c.regions = SafetyRegions{preset.domain, preset.initial, preset.unsafe};
  c.perturbation_frequency = preset.perturbation_frequency;
  c.mode = mode;
  const bool supply = preset.name == "supply-demand";
  if (mode == GuaranteeMode::kDeterministic) {
    c.scheme = SamplingScheme::kUniformGrid;
    c.samples = supply ? 220'000 : 90'000;
  } else {
    c.scheme = SamplingScheme::kIidUniform;
    c.samples = supply ? 300'000 : 260'000;
    c.beta = 0.05;
  }
  return c;
}

namespace {

RegionBox parse_box(const json& j) {
  return RegionBox(j.at("lower").get<std::vector<double>>(), j.at("upper").get<std::vector<double>>());
}

json box_json(const RegionBox& box) { return {{"lower", box.lower()}, {"upper", box.upper()}}; }

SystemModel parse_custom(const json& j) {
  const std::string family = j.at("family").get<std::string>();
  const auto dim = j.at("dimension").get<std::size_t>();
  auto vec = [&](const char* key) {
    return j.contains(key) ? j.at(key).get<std::vector<double>>() : std::vector<double>{};
  };
  if (family == "affine") return SystemModel::affine(dim, vec("linear"), vec("offset"));
  if (family == "quadratic") return SystemModel::quadratic(dim, vec("offset"), vec("linear"), vec("quad"));
  fail(ErrorKind::kValidation, "unknown model family '" + family + "'");
}

RunConfig parse_json(const json& root) {
  RunConfig c;
  const json& system = root.at("system");
  GuaranteeMode mode = GuaranteeMode::kDeterministic;
  if (root.contains("certification") && root["certification"].contains("mode")) {
    mode = guarantee_mode_from_string(root["certification"]["mode"].get<std::string>());
  }
  if (system.contains("preset")) {
    c = preset_config(system.at("preset").get<std::string>(), mode);
  } else if (system.contains("custom")) {
    c.system_name = "custom";
    c.physics = parse_custom(system.at("custom"));
    c.mode = mode;
    c.beta.reset();
    if (!root.contains("regions")) fail(ErrorKind::kValidation, "custom systems require regions");
  } else {
    fail(ErrorKind::kValidation, "system needs a 'preset' or 'custom' entry");
  }

  if (root.contains("regions")) {
    const json& r = root.at("regions");
    c.regions = SafetyRegions{parse_box(r.at("X")), parse_box(r.at("X0")), parse_box(r.at("Xu"))};
    if (c.system_name == "custom") c.perturbation_frequency = 1.0 / c.regions.domain.width(0);
  }

  if (root.contains("perturbation")) {
    const json& p = root.at("perturbation");
    if (p.is_null()) {
      c.perturbation_enabled = false;
    } else {
      c.perturbation_enabled = p.value("enabled", true);
      if (p.contains("amplitude") && !p["amplitude"].is_null()) c.perturbation_amplitude = p["amplitude"].get<double>();
      c.perturbation_frequency = p.value("frequency", c.perturbation_frequency);
      c.perturbation_phase = p.value("phase", c.perturbation_phase);
    }
  }

  if (root.contains("sampling")) {
    const json& s = root.at("sampling");
    if (s.contains("scheme")) c.scheme = sampling_scheme_from_string(s["scheme"].get<std::string>());
    c.samples = s.value("count", c.samples);
    if (s.contains("grid_counts")) c.grid_counts = s["grid_counts"].get<std::vector<std::size_t>>();
    c.seed = s.value("seed", c.seed);
  }

  if (root.contains("filter")) {
    const json& f = root.at("filter");
    c.filter_enabled = f.value("enabled", c.filter_enabled);
    c.delta = f.value("delta", c.delta);
  }

  if (root.contains("barrier")) {
    const json& b = root.at("barrier");
    c.kappa = b.value("kappa", c.kappa);
    c.template_degree = b.value("degree", c.template_degree);
    c.template_constant = b.value("constant", c.template_constant);
    c.assembly.coefficient_bound = b.value("coefficient_bound", c.assembly.coefficient_bound);
    c.assembly.level_bound = b.value("level_bound", c.assembly.level_bound);
    c.assembly.level_gap = b.value("level_gap", c.assembly.level_gap);
    c.assembly.bounded = b.value("bounded", c.assembly.bounded);
    if (b.contains("cover_density") && !b["cover_density"].is_null()) {
      c.cover_density = b["cover_density"].get<double>();
    }
  }

  if (root.contains("certification")) {
    const json& cert = root.at("certification");
    if (cert.contains("beta")) {
      if (cert["beta"].is_null()) c.beta.reset(); else c.beta = cert["beta"].get<double>();
    }
    if (cert.contains("c") && !cert["c"].is_null()) c.decision_count = cert["c"].get<std::size_t>();
  }

  if (root.contains("lipschitz")) {
    const json& l = root.at("lipschitz");
    if (l.contains("method")) c.lipschitz.method = lipschitz_method_from_string(l["method"].get<std::string>());
    c.lipschitz.safety_multiplier = l.value("multiplier", c.lipschitz.safety_multiplier);
    c.lipschitz.pair_budget = l.value("pair_budget", c.lipschitz.pair_budget);
    c.lipschitz.seed = l.value("seed", c.lipschitz.seed);
    c.lipschitz.include_neighbours = l.value("include_neighbours", c.lipschitz.include_neighbours);
    c.lipschitz.batches = l.value("batches", c.lipschitz.batches);
    c.lipschitz.batch_size = l.value("batch_size", c.lipschitz.batch_size);
    c.lipschitz.local_window = l.value("local_window", c.lipschitz.local_window);
  }

  if (root.contains("solver")) {
    const json& s = root.at("solver");
    c.solver.feasibility_tol = s.value("feasibility_tol", c.solver.feasibility_tol);
    c.solver.optimality_tol = s.value("optimality_tol", c.solver.optimality_tol);
    c.solver.max_iterations = s.value("max_iterations", c.solver.max_iterations);
    c.solver.minmax_max_iterations = s.value("minmax_max_iterations", c.solver.minmax_max_iterations);
    c.cross_check = s.value("cross_check", c.cross_check);
  }

  if (root.contains("validation")) {
    const json& v = root.at("validation");
    c.validation_trajectories = v.value("trajectories", c.validation_trajectories);
    c.validation_horizon = v.value("horizon", c.validation_horizon);
    c.validation_seed = v.value("seed", c.validation_seed);
  }

  if (root.contains("output")) {
    const json& o = root.at("output");
    if (o.contains("dir") && !o["dir"].is_null()) c.output_dir = o["dir"].get<std::string>();
    c.write_datasets = o.value("write_datasets", c.write_datasets);
  }
  return c;
}

json model_json(const SystemModel& m) {
  json j{{"family", to_string(m.family())},
         {"dimension", m.dimension()},
         {"offset", m.offset()},
         {"linear", m.linear()}};
  if (m.family() == ModelKind::kQuadratic) j["quad"] = m.quad();
  return j;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  RunConfig c;
  try {
    c = parse_json(json::parse(json_text));
  } catch (const json::exception& e) {
    fail(ErrorKind::kParse, std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kFile, "cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

std::string run_config_to_json(const RunConfig& c, int indent) {
  json root;
  if (c.system_name == "custom") {
    root["system"] = {{"custom", model_json(c.physics)}};
  } else {
    root["system"] = {{"preset", c.system_name}};
  }
  root["regions"] = {{"X", box_json(c.regions.domain)},
                     {"X0", box_json(c.regions.initial)},
                     {"Xu", box_json(c.regions.unsafe)}};
  if (c.perturbation_enabled) {
    root["perturbation"] = {{"amplitude", c.perturbation_amplitude ? json(*c.perturbation_amplitude) : json(nullptr)},
                            {"frequency", c.perturbation_frequency},
                            {"phase", c.perturbation_phase}};
  } else {
    root["perturbation"] = nullptr;
  }
  root["sampling"] = {{"scheme", to_string(c.scheme)}, {"count", c.samples}, {"seed", c.seed}};
  if (!c.grid_counts.empty()) root["sampling"]["grid_counts"] = c.grid_counts;
  root["filter"] = {{"enabled", c.filter_enabled}, {"delta", c.delta}};
  root["barrier"] = {{"kappa", c.kappa},
                     {"degree", c.template_degree},
                     {"constant", c.template_constant},
                     {"coefficient_bound", c.assembly.coefficient_bound},
                     {"level_bound", c.assembly.level_bound},
                     {"level_gap", c.assembly.level_gap},
                     {"bounded", c.assembly.bounded},
                     {"cover_density", c.cover_density ? json(*c.cover_density) : json(nullptr)}};
  root["certification"] = {{"mode", to_string(c.mode)},
                           {"beta", c.beta ? json(*c.beta) : json(nullptr)},
                           {"c", c.decision_count ? json(*c.decision_count) : json(nullptr)}};
  root["lipschitz"] = {{"method", to_string(c.lipschitz.method)},
                       {"multiplier", c.lipschitz.safety_multiplier},
                       {"pair_budget", c.lipschitz.pair_budget},
                       {"seed", c.lipschitz.seed},
                       {"include_neighbours", c.lipschitz.include_neighbours},
                       {"batches", c.lipschitz.batches},
                       {"batch_size", c.lipschitz.batch_size},
                       {"local_window", c.lipschitz.local_window}};
  root["solver"] = {{"feasibility_tol", c.solver.feasibility_tol},
                    {"optimality_tol", c.solver.optimality_tol},
                    {"max_iterations", c.solver.max_iterations},
                    {"minmax_max_iterations", c.solver.minmax_max_iterations},
                    {"cross_check", c.cross_check}};
  root["validation"] = {{"trajectories", c.validation_trajectories},
                        {"horizon", c.validation_horizon},
                        {"seed", c.validation_seed}};
  root["output"] = {{"dir", c.output_dir.empty() ? json(nullptr) : json(c.output_dir.string())},
                    {"write_datasets", c.write_datasets}};
  return root.dump(indent);
}

}  // namespace physbc
