#include <algorithm>
#include <chrono>
#include <fstream>
#include <future>
#include <ostream>

#include "maenv/errors.hpp"
#include "maenv/runner.hpp"
#include "scenarios.hpp"

namespace maenv::runner {

bool RunManifest::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["scenario"] = scenario;
  j["config_hash"] = config_hash;
  j["version"] = version;
  j["seed"] = seed;
  j["runtime_seconds"] = runtime_seconds;
  j["passed"] = passed();
  j["reports"] = nlohmann::json::array();
  for (const auto& [name, r] : reports) {
    j["reports"].push_back({{"operation", name},
                            {"method", r.method},
                            {"iterations", r.iterations},
                            {"converged", r.converged},
                            {"residual", r.residual},
                            {"complementarity_defect", r.complementarity_defect}});
  }
  j["files"] = nlohmann::json::array();
  for (const FileEntry& f : files) j["files"].push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  j["checks"] = nlohmann::json::array();
  for (const Check& c : checks) {
    j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"threshold", c.threshold}});
  }
  return j;
}

RunManifest execute_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  RunManifest manifest;
  manifest.scenario = config.scenario();
  manifest.config_hash = config.hash();
  manifest.seed = config.get_seed();
  {
    std::ofstream cfg(out_dir / "config.cfg");
    cfg << config.canonical();
  }
  const auto t0 = std::chrono::steady_clock::now();
  Context ctx{out_dir, manifest};
  dispatch(config, ctx);
  manifest.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(out_dir)) {
    if (entry.is_regular_file() && entry.path().filename() != "manifest.json") paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  for (const auto& p : paths) {
    manifest.files.push_back(
        {std::filesystem::relative(p, out_dir).generic_string(), sha256_file(p), std::filesystem::file_size(p)});
  }
  std::ofstream out(out_dir / "manifest.json");
  if (!out) throw Error("cannot write manifest in " + out_dir.string());
  out << manifest.to_json().dump(2) << '\n';
  return manifest;
}

RunManifest run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir) {
  RunManifest manifest = execute_scenario(config, out_dir);
  if (!manifest.passed()) {
    std::string failed;
    for (const Check& c : manifest.checks) {
      if (!c.passed) failed += (failed.empty() ? "" : ", ") + c.name;
    }
    throw ScenarioFailure(config.scenario() + ": failed checks: " + failed);
  }
  return manifest;
}

bool VerifySummary::passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const VerifyRow& r) { return r.passed; });
}

void VerifySummary::print(std::ostream& out) const {
  std::size_t failures = 0;
  for (const VerifyRow& r : rows) {
    out << (r.passed ? "PASS  " : "FAIL  ") << r.config << "  " << r.scenario;
    if (!r.error.empty()) out << "  (" << r.error << ")";
    out << '\n';
    for (const Check& c : r.checks) {
      if (!c.passed) out << "        " << c.name << " = " << c.value << " (threshold " << c.threshold << ")\n";
    }
    failures += !r.passed;
  }
  out << rows.size() << " scenarios, " << failures << " failed\n";
}

VerifySummary verify_all(const std::filesystem::path& config_dir, const std::filesystem::path& out_root,
                         bool parallel) {
  if (!std::filesystem::is_directory(config_dir)) throw ConfigError("not a directory: " + config_dir.string());
  std::vector<std::filesystem::path> configs;
  for (const auto& entry : std::filesystem::directory_iterator(config_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".cfg") configs.push_back(entry.path());
  }
  std::sort(configs.begin(), configs.end());

  auto run_one = [&out_root](const std::filesystem::path& path) {
    VerifyRow row;
    row.config = path.filename().string();
    try {
      ScenarioConfig config = ScenarioConfig::load(path);
      config.apply_environment();
      row.scenario = config.scenario();
      const RunManifest m = execute_scenario(config, out_root / path.stem());
      row.checks = m.checks;
      row.passed = m.passed();
    } catch (const std::exception& e) {
      row.error = e.what();
      row.passed = false;
    }
    return row;
  };

  VerifySummary summary;
  if (parallel) {
    std::vector<std::future<VerifyRow>> jobs;
    for (const auto& p : configs) jobs.push_back(std::async(std::launch::async, run_one, p));
    for (auto& j : jobs) summary.rows.push_back(j.get());
  } else {
    for (const auto& p : configs) summary.rows.push_back(run_one(p));
  }
  return summary;
}

}  // namespace maenv::runner
