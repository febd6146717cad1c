// INI-style experiment configuration.
#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcf/grid.hpp"

namespace mcf::cli {

/// Invalid or inconsistent configuration; maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat "section.key" -> value map read from an INI file.
class Config {
 public:
  Config() = default;

  static Config parse(std::istream& in, const std::string& source);
  static Config load(const std::filesystem::path& path);

  const std::string& source() const { return source_; }
  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::vector<std::string> keys() const;
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }

  std::string text(const std::string& key) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  double real(const std::string& key) const;
  double real(const std::string& key, double fallback) const;
  int integer(const std::string& key) const;
  int integer(const std::string& key, int fallback) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<double> reals(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<int> integers(const std::string& key) const;
  std::vector<int> integers(const std::string& key, const std::vector<int>& fallback) const;
  /// Comma-separated entries, each a real number or "re:im".
  CVec complex_vector(const std::string& key) const;
  CVec complex_vector(const std::string& key, const CVec& fallback) const;

  /// Raises a ConfigError naming the source and key.
  [[noreturn]] void fail(const std::string& key, const std::string& message) const;

 private:
  std::string source_;
  std::map<std::string, std::string> values_;
};

}  // namespace mcf::cli
