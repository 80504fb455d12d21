#pragma once

// Scenario runner behind the maenv command line tool.
//
// A config is a text file of `key = value` lines; `#` starts a comment. Every
// scenario has a fixed set of keys with defaults, and unknown keys are errors.
// Field families are written as a name followed by numbers, e.g. `cosine 1 0.5`.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "maenv/report.hpp"

namespace maenv::runner {

inline constexpr const char* kVersion = "0.1.0";

/// Scenario names in the order verify-all reports them.
const std::vector<std::string>& scenario_names();

class ScenarioConfig {
 public:
  /// Defaults for `scenario`. Throws ConfigError for an unknown scenario.
  static ScenarioConfig defaults(const std::string& scenario);
  static ScenarioConfig parse(std::istream& in, const std::string& source = "<config>");
  static ScenarioConfig load(const std::filesystem::path& path);

  const std::string& scenario() const noexcept { return scenario_; }

  /// Throws ConfigError naming the key when it is unknown or its value is malformed.
  void set(const std::string& key, const std::string& value);
  /// Applies MAENV_SEED when it is set.
  void apply_environment();

  int get_int(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::uint64_t get_seed() const;
  const std::string& get_string(const std::string& key) const;
  std::vector<double> get_list(const std::string& key) const;

  /// Sorted `key = value` lines.
  std::string canonical() const;
  /// SHA-256 of canonical().
  std::string hash() const;

 private:
  std::string scenario_;
  std::map<std::string, std::string> values_;
};

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
};

struct FileEntry {
  std::string path;  ///< relative to the output directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  std::string scenario;
  std::string config_hash;
  std::string version = kVersion;
  std::uint64_t seed = 0;
  double runtime_seconds = 0.0;
  std::vector<std::pair<std::string, SolverReport>> reports;
  std::vector<FileEntry> files;
  std::vector<Check> checks;

  bool passed() const;
  nlohmann::json to_json() const;
};

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Runs the scenario, writes its artifacts and manifest.json into out_dir and returns the manifest.
RunManifest execute_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir);

/// execute_scenario, then throws ScenarioFailure when a check failed; the manifest is written either way.
RunManifest run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir);

struct VerifyRow {
  std::string config;
  std::string scenario;
  bool passed = false;
  std::string error;  ///< ConfigError or other failure text
  std::vector<Check> checks;
};

struct VerifySummary {
  std::vector<VerifyRow> rows;
  bool passed() const;
  void print(std::ostream& out) const;
};

/// Runs every *.cfg in config_dir (sorted by name) into out_root/<stem>.
VerifySummary verify_all(const std::filesystem::path& config_dir, const std::filesystem::path& out_root,
                         bool parallel = false);

}  // namespace maenv::runner
