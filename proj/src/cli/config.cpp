#include "mcf/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace mcf::cli {

namespace pt = boost::property_tree;

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(","));
  for (auto& p : parts) boost::trim(p);
  if (parts.size() == 1 && parts[0].empty()) parts.clear();
  return parts;
}

std::optional<double> to_real(const std::string& s) {
  double v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

}  // namespace

Config Config::parse(std::istream& in, const std::string& source) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  Config c;
  c.source_ = source;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      c.values_[section] = body.data();
      continue;
    }
    for (const auto& [key, value] : body) c.values_[section + "." + key] = boost::trim_copy(value.data());
  }
  return c;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path.string() + "'");
  return parse(in, path.string());
}

std::vector<std::string> Config::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_) out.push_back(k);
  return out;
}

void Config::fail(const std::string& key, const std::string& message) const {
  throw ConfigError(source_ + ": key '" + key + "': " + message);
}

std::string Config::text(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) fail(key, "missing required key");
  return it->second;
}

std::string Config::text(const std::string& key, const std::string& fallback) const {
  return has(key) ? text(key) : fallback;
}

double Config::real(const std::string& key) const {
  const auto v = to_real(text(key));
  if (!v) fail(key, "expected a real number, got '" + text(key) + "'");
  return *v;
}

double Config::real(const std::string& key, double fallback) const { return has(key) ? real(key) : fallback; }

int Config::integer(const std::string& key) const {
  const std::string s = text(key);
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) fail(key, "expected an integer, got '" + s + "'");
  return v;
}

int Config::integer(const std::string& key, int fallback) const { return has(key) ? integer(key) : fallback; }

std::vector<double> Config::reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& part : split_list(text(key))) {
    const auto v = to_real(part);
    if (!v) fail(key, "expected a list of reals, got entry '" + part + "'");
    out.push_back(*v);
  }
  if (out.empty()) fail(key, "list must not be empty");
  return out;
}

std::vector<double> Config::reals(const std::string& key, const std::vector<double>& fallback) const {
  return has(key) ? reals(key) : fallback;
}

std::vector<int> Config::integers(const std::string& key) const {
  std::vector<int> out;
  for (double v : reals(key)) {
    if (v != static_cast<int>(v)) fail(key, "expected a list of integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::vector<int> Config::integers(const std::string& key, const std::vector<int>& fallback) const {
  return has(key) ? integers(key) : fallback;
}

CVec Config::complex_vector(const std::string& key) const {
  const auto parts = split_list(text(key));
  if (parts.empty()) fail(key, "vector must not be empty");
  CVec out(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto colon = parts[i].find(':');
    const auto re = to_real(parts[i].substr(0, colon));
    const auto im = colon == std::string::npos ? std::optional<double>(0.0) : to_real(parts[i].substr(colon + 1));
    if (!re || !im) fail(key, "expected entries 're' or 're:im', got '" + parts[i] + "'");
    out[static_cast<Eigen::Index>(i)] = cplx(*re, *im);
  }
  return out;
}

CVec Config::complex_vector(const std::string& key, const CVec& fallback) const {
  return has(key) ? complex_vector(key) : fallback;
}

}  // namespace mcf::cli
