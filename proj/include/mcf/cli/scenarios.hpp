// Named scenario library and the registries that map configuration keys to
// generators, integrands and symbols.
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mcf/cli/config.hpp"
#include "mcf/pairing.hpp"

namespace mcf::cli {

/// One declared expectation and its outcome.
struct Check {
  std::string name;
  double observed = 0;
  /// "near" (|observed - target| <= tolerance), "below" (observed < target), "above", "holds".
  std::string relation;
  double target = 0;
  double tolerance = 0;
  bool pass = false;

  static Check near(std::string name, double observed, double target, double tolerance);
  static Check below(std::string name, double observed, double bound);
  static Check above(std::string name, double observed, double bound);
  static Check holds(std::string name, bool ok);
};

struct ScenarioReport {
  std::string scenario;
  std::string description;
  std::vector<Check> checks;
  nlohmann::json details = nlohmann::json::object();
  std::vector<std::string> artifacts;
  std::vector<std::string> diagnostics;
  std::optional<std::uint64_t> seed;

  bool pass() const;
};

nlohmann::json to_json(const ScenarioReport& report);

/// Output directory, artifact bookkeeping and the shared directional constant.
class ScenarioContext {
 public:
  ScenarioContext(std::filesystem::path out_dir, Config config, std::optional<double> c_dir);

  const Config& config() const { return config_; }
  const std::filesystem::path& out_dir() const { return out_dir_; }
  ScenarioReport& report() { return report_; }

  /// Opens `name` inside the output directory and records it.
  std::ofstream artifact(const std::string& name);
  void check(Check c) { report_.checks.push_back(std::move(c)); }
  void detail(const std::string& key, nlohmann::json value) { report_.details[key] = std::move(value); }
  void note(std::string text) { report_.diagnostics.push_back(std::move(text)); }
  void seed(std::uint64_t s) { report_.seed = s; }
  /// Calibrated on first use unless supplied.
  double c_dir();

 private:
  std::filesystem::path out_dir_;
  Config config_;
  std::optional<double> c_dir_;
  ScenarioReport report_;
};

using ScenarioBody = std::function<void(ScenarioContext&)>;

struct Scenario {
  std::string name;
  std::string description;
  /// Validates the configuration and returns the computation. Throws ConfigError before any work.
  std::function<ScenarioBody(const Config&)> prepare;
};

const std::vector<Scenario>& scenario_registry();
const Scenario& find_scenario(const std::string& name);

Grid make_grid(const Config& c);
SequenceGenerator make_generator(const Config& c, int dim);
TestIntegrand make_integrand(const Config& c, double p, int N);
MultiplierSymbol make_symbol(const Config& c, int N, int dim);
LimitParams make_limit_params(const Config& c);

nlohmann::json to_json(const EmpiricalPairing& pairing);

}  // namespace mcf::cli
