// Command implementations behind the mcflab executable.
#pragma once

#include <filesystem>
#include <iosfwd>

namespace mcf::cli {

enum ExitCode : int { kPass = 0, kExpectationFailed = 1, kConfigError = 2 };

/// $MCFLAB_OUTPUT_ROOT, or "mcflab-out" when unset.
std::filesystem::path output_root();

int run_config(const std::filesystem::path& config, const std::filesystem::path& root, std::ostream& log);
/// Runs every built-in scenario into root/<name>/ and writes root/summary.json.
int run_all(const std::filesystem::path& root, std::ostream& log);
int list_scenarios(std::ostream& out);
/// Fits the directional constant and stores it in root/calibration.json.
int calibrate(const std::filesystem::path& root, std::ostream& log);
int scan_wavefront(const std::filesystem::path& config, const std::filesystem::path& root, std::ostream& log);

}  // namespace mcf::cli
