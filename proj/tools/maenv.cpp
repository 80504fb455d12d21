#include <CLI11.hpp>

#include <iomanip>
#include <iostream>

#include "maenv/errors.hpp"
#include "maenv/runner.hpp"

namespace {

void print_checks(const maenv::runner::RunManifest& m) {
  for (const auto& c : m.checks) {
    std::cout << (c.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(40) << c.name << std::right
              << std::setprecision(6) << c.value << "  (threshold " << c.threshold << ")\n";
  }
  std::cout << m.scenario << ": " << (m.passed() ? "passed" : "FAILED") << " in " << std::setprecision(3)
            << m.runtime_seconds << " s\n";
}

}  // namespace

int main(int argc, char** argv) {
  using namespace maenv::runner;
  CLI::App app{"Envelope and Monge-Ampere experiments on the flat torus and radial CP^n"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string scenario, config_path, out_dir = "maenv-out";
  std::vector<std::string> overrides;
  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("scenario", scenario, "Scenario name")->required()->check(CLI::IsMember(scenario_names()));
  run->add_option("--config", config_path, "Config file (key = value)")->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--set", overrides, "Override a config key, key=value");

  std::string config_dir, out_root = "maenv-runs";
  bool parallel = false;
  auto* verify = app.add_subcommand("verify-all", "Run every config in a directory and print the acceptance matrix");
  verify->add_option("dir", config_dir, "Directory of *.cfg files")->required();
  verify->add_option("--out", out_root, "Root of the per-config output directories");
  verify->add_flag("--parallel", parallel, "Run scenarios concurrently");

  auto* list = app.add_subcommand("list", "List scenarios and their default configs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      ScenarioConfig config = config_path.empty() ? ScenarioConfig::defaults(scenario) : ScenarioConfig::load(config_path);
      if (config.scenario() != scenario) {
        throw maenv::ConfigError("scenario: config is for '" + config.scenario() + "', not '" + scenario + "'");
      }
      for (const std::string& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw maenv::ConfigError("--set expects key=value, got '" + kv + "'");
        config.set(kv.substr(0, eq), kv.substr(eq + 1));
      }
      config.apply_environment();
      const RunManifest m = execute_scenario(config, out_dir);
      print_checks(m);
      return m.passed() ? 0 : 1;
    }
    if (*verify) {
      const VerifySummary summary = verify_all(config_dir, out_root, parallel);
      summary.print(std::cout);
      return summary.passed() ? 0 : 1;
    }
    if (*list) {
      for (const std::string& name : scenario_names()) {
        std::cout << "# " << name << '\n' << ScenarioConfig::defaults(name).canonical() << '\n';
      }
      return 0;
    }
  } catch (const maenv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
