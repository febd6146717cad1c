#include "mcf/cli/runner.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "mcf/cli/scenarios.hpp"
#include "mcf/extract.hpp"
#include "mcf/constraint.hpp"
#include "mcf/oracle.hpp"

namespace mcf::cli {

namespace {

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::optional<double> stored_c_dir(const std::filesystem::path& root) {
  std::ifstream in(root / "calibration.json");
  if (!in) return std::nullopt;
  try {
    return nlohmann::json::parse(in).at("c_dir").get<double>();
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
}

// Runs a prepared body, turning runtime failures into diagnostics.
ScenarioReport execute(const Scenario& s, const ScenarioBody& body, const Config& cfg,
                       const std::filesystem::path& out_dir, const std::filesystem::path& root) {
  ScenarioContext ctx(out_dir, cfg, stored_c_dir(root));
  ctx.report().scenario = s.name;
  ctx.report().description = s.description;
  try {
    body(ctx);
  } catch (const std::exception& e) {
    ctx.note(std::string("runtime failure: ") + e.what());
  }
  if (ctx.report().checks.empty() && ctx.report().diagnostics.empty())
    ctx.note("scenario declared no expectations");
  ScenarioReport report = ctx.report();
  write_json(out_dir / "summary.json", to_json(report));
  return report;
}

void log_report(const ScenarioReport& r, std::ostream& log) {
  log << (r.pass() ? "PASS " : "FAIL ") << r.scenario << '\n';
  for (const auto& c : r.checks)
    if (!c.pass) log << "  failed: " << c.name << " (observed " << c.observed << ")\n";
  for (const auto& d : r.diagnostics) log << "  " << d << '\n';
}

}  // namespace

std::filesystem::path output_root() {
  const char* env = std::getenv("MCFLAB_OUTPUT_ROOT");
  return env && *env ? std::filesystem::path(env) : std::filesystem::path("mcflab-out");
}

int run_config(const std::filesystem::path& config, const std::filesystem::path& root, std::ostream& log) {
  Config cfg;
  const Scenario* scenario = nullptr;
  ScenarioBody body;
  try {
    cfg = Config::load(config);
    scenario = &find_scenario(cfg.text("experiment.scenario", "pairing"));
    body = scenario->prepare(cfg);
  } catch (const ConfigError& e) {
    log << "configuration error: " << e.what() << '\n';
    return kConfigError;
  }
  const auto out_dir = root / cfg.text("experiment.output", scenario->name);
  const auto report = execute(*scenario, body, cfg, out_dir, root);
  log_report(report, log);
  return report.pass() ? kPass : kExpectationFailed;
}

int run_all(const std::filesystem::path& root, std::ostream& log) {
  nlohmann::json summary;
  summary["scenarios"] = nlohmann::json::array();
  bool all = true;
  for (const auto& s : scenario_registry()) {
    if (s.name == "pairing") continue;
    const Config empty;
    const auto report = execute(s, s.prepare(empty), empty, root / s.name, root);
    log_report(report, log);
    all = all && report.pass();
    summary["scenarios"].push_back({{"name", s.name}, {"pass", report.pass()}});
  }
  summary["pass"] = all;
  write_json(root / "summary.json", summary);
  return all ? kPass : kExpectationFailed;
}

int list_scenarios(std::ostream& out) {
  for (const auto& s : scenario_registry()) out << s.name << "\t" << s.description << '\n';
  return kPass;
}

int calibrate(const std::filesystem::path& root, std::ostream& log) {
  const LimitParams params;
  try {
    const auto c = calibrate_direction(params);
    write_json(root / "calibration.json", {{"c_dir", c.c_dir},
                                           {"empirical", c.empirical},
                                           {"uncalibrated_oracle", c.uncalibrated_oracle},
                                           {"n", params.grid.n()},
                                           {"j_list", params.j_list},
                                           {"R_list", params.R_list}});
    log << "c_dir = " << c.c_dir << '\n';
    return kPass;
  } catch (const std::exception& e) {
    log << "calibration failed: " << e.what() << '\n';
    return kExpectationFailed;
  }
}

int scan_wavefront(const std::filesystem::path& config, const std::filesystem::path& root, std::ostream& log) {
  Config cfg;
  std::optional<SequenceGenerator> gen;
  LimitParams params;
  std::vector<RVec> xs, dirs;
  ZTarget z;
  WavefrontWidths widths;
  try {
    cfg = Config::load(config);
    params = make_limit_params(cfg);
    gen = make_generator(cfg, params.grid.dim());
    validate_limit_params(*gen, params);
    const int dim = params.grid.dim();
    const int per_axis = cfg.integer("wavefront.x_points", 8);
    if (per_axis < 1) cfg.fail("wavefront.x_points", "must be positive");
    std::size_t total = 1;
    for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(per_axis);
    for (std::size_t i = 0; i < total; ++i) {
      RVec x(dim);
      std::size_t rest = i;
      for (int a = dim - 1; a >= 0; --a) {
        x[a] = static_cast<double>(rest % per_axis) / per_axis;
        rest /= per_axis;
      }
      xs.push_back(x);
    }
    dirs = sphere_grid(dim, cfg.integer("wavefront.directions", dim == 1 ? 2 : 16));
    z.z = cfg.complex_vector("wavefront.z", CVec::Ones(gen->N()));
    z.at_infinity = cfg.text("wavefront.at_infinity", "false") == "true";
    if (z.at_infinity) z.z.normalize();
    widths.x_width = cfg.real("wavefront.x_width", widths.x_width);
    widths.z_width = cfg.real("wavefront.z_width", widths.z_width);
    widths.cone_half_angle = cfg.real("wavefront.cone_half_angle", widths.cone_half_angle);
  } catch (const ConfigError& e) {
    log << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    log << "configuration error: " << e.what() << '\n';
    return kConfigError;
  }
  Scenario s{"scan-wavefront", "wavefront indicator scan", {}};
  ScenarioBody body = [&](ScenarioContext& ctx) {
    const auto scan = wavefront_scan(*gen, xs, {z}, dirs, widths, params);
    auto out = ctx.artifact("wavefront.csv");
    write_wavefront_csv(scan, out);
    ctx.detail("generator", gen->description());
    ctx.detail("max_indicator", scan.max_indicator);
    ctx.detail("threshold", scan.threshold);
    ctx.check(Check::holds("scan completed", true));
  };
  const auto report = execute(s, body, cfg, root / cfg.text("experiment.output", "scan-wavefront"), root);
  log_report(report, log);
  return report.pass() ? kPass : kExpectationFailed;
}

}  // namespace mcf::cli
