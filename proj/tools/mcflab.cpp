// mcflab: run microlocal pairing experiments from INI configurations.
#include <iostream>

#include "CLI11.hpp"
#include "mcf/cli/runner.hpp"

int main(int argc, char** argv) {
  using namespace mcf::cli;
  CLI::App app{"Microlocal compactness form experiments"};
  app.require_subcommand(1);
  std::string target, config;

  auto* run = app.add_subcommand("run", "run a configuration file, or every built-in scenario with 'all'");
  run->add_option("config", target, "configuration file or 'all'")->required();
  auto* list = app.add_subcommand("list-scenarios", "list built-in scenarios");
  auto* cal = app.add_subcommand("calibrate", "fit and store the directional normalization");
  auto* scan = app.add_subcommand("scan-wavefront", "scan wavefront indicators for a configuration");
  scan->add_option("config", config, "configuration file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kConfigError;
  }

  const auto root = output_root();
  try {
    if (*run) return target == "all" ? run_all(root, std::cout) : run_config(target, root, std::cerr);
    if (*list) return list_scenarios(std::cout);
    if (*cal) return calibrate(root, std::cout);
    if (*scan) return scan_wavefront(config, root, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExpectationFailed;
  }
  return kConfigError;
}
