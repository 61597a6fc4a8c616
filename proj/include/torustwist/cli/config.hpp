// Run configuration: a flat `key = value` file (numbers, quoted strings,
// booleans, lists in brackets, `#` comments) plus command-line overrides.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "torustwist/maps.hpp"

namespace torustwist::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfigEntry {
  nlohmann::json value;
  std::string origin;  ///< "file.toml:12" or "--set"
};

class RunConfig {
 public:
  std::string command;
  std::string subcommand;  ///< birkhoff | vertical for `orbit`
  std::filesystem::path out_dir = "out";
  int workers = 1;
  std::uint64_t rng_seed = 0;

  /// Parses `text`; `source` names the file in diagnostics.
  void load(const std::string& text, const std::string& source);
  void load_file(const std::filesystem::path& path);
  /// `key=value`, later calls win.
  void set_override(const std::string& assignment);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  double get_double(const std::string& key, std::optional<double> fallback = std::nullopt) const;
  long get_int(const std::string& key, std::optional<long> fallback = std::nullopt) const;
  bool get_bool(const std::string& key, std::optional<bool> fallback = std::nullopt) const;
  std::string get_string(const std::string& key, std::optional<std::string> fallback = std::nullopt) const;
  std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback = {}) const;
  std::vector<std::string> get_strings(const std::string& key, std::vector<std::string> fallback = {}) const;
  double get_positive(const std::string& key, double fallback) const;

  /// Throws on any key outside `allowed` or on a family parameter that the
  /// selected family does not take.
  void validate_keys(const std::set<std::string>& allowed) const;

  TwistFamily family() const;
  /// The family with its primary parameter replaced by lambda.
  TwistFamily family_at(double lambda) const;
  std::string family_name() const { return get_string("family", "standard"); }

  /// Everything that determines the run, as JSON.
  nlohmann::json echo() const;

 private:
  const ConfigEntry& entry(const std::string& key) const;
  [[noreturn]] void type_error(const std::string& key, const char* expected) const;
  std::map<std::string, ConfigEntry> entries_;
};

/// Parses one value literal; throws ConfigError with `where` on failure.
nlohmann::json parse_value(const std::string& literal, const std::string& where);

/// Keys accepted by every command.
const std::set<std::string>& common_keys();
/// Parameter keys of one built-in family.
std::vector<std::string> family_keys(const std::string& family);

}  // namespace torustwist::cli
