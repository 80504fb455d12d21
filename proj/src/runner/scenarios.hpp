#pragma once

#include <filesystem>
#include <string>

#include "maenv/grid.hpp"
#include "maenv/io.hpp"
#include "maenv/runner.hpp"

namespace maenv::runner {

/// Sink for one scenario's artifacts, checks and solver reports.
struct Context {
  std::filesystem::path out_dir;
  RunManifest& manifest;

  void check(const std::string& name, bool passed, double value, double threshold);
  void report(const std::string& name, const SolverReport& r);
  void table(const std::string& name, const io::Table& t);
  void grid(const std::string& name, const GridField& f);
  void json(const std::string& name, const nlohmann::json& j);
};

void dispatch(const ScenarioConfig& config, Context& ctx);

}  // namespace maenv::runner
