// Acceptance suite: runs every criterion at full size and prints one PASS/FAIL line each.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "maenv/runner.hpp"

namespace fs = std::filesystem;
using maenv::runner::Check;
using maenv::runner::RunManifest;
using maenv::runner::ScenarioConfig;

namespace {

using Overrides = std::vector<std::pair<std::string, std::string>>;

struct Outcome {
  bool passed = true;
  std::string detail;
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

RunManifest run(const std::string& scenario, const Overrides& overrides, const fs::path& dir) {
  ScenarioConfig c = ScenarioConfig::defaults(scenario);
  for (const auto& [k, v] : overrides) c.set(k, v);
  return maenv::runner::execute_scenario(c, dir);
}

// Folds the scenario's own checks into the outcome; failing checks are listed by name.
void absorb(Outcome& o, const RunManifest& m, const std::string& tag = "") {
  for (const Check& c : m.checks) {
    if (!c.passed) {
      o.passed = false;
      o.note(tag + c.name + "=" + fmt(c.value) + " (limit " + fmt(c.threshold) + ")");
    }
  }
}

const Check* find(const RunManifest& m, const std::string& name) {
  for (const Check& c : m.checks)
    if (c.name == name) return &c;
  return nullptr;
}

void report(Outcome& o, const RunManifest& m, const std::string& name) {
  if (const Check* c = find(m, name)) o.note(name + "=" + fmt(c->value));
}

void runtime_limit(Outcome& o, const RunManifest& m, double limit) {
  o.note("runtime=" + fmt(m.runtime_seconds) + "s");
  if (m.runtime_seconds >= limit) {
    o.passed = false;
    o.note("runtime over " + fmt(limit) + "s");
  }
}

struct Criterion {
  int id;
  std::string title;
  std::function<Outcome(const fs::path&)> body;
};

std::vector<Criterion> criteria() {
  std::vector<Criterion> out;
  out.push_back({1, "radial ball envelope, atoms and defects", [](const fs::path& d) {
                   Outcome o;
                   RunManifest m = run("radial-ball", {{"M", "4096"}, {"dims", "1,2,3"}}, d);
                   absorb(o, m);
                   report(o, m, "envelope_sup_error");
                   report(o, m, "atom_mass_error_n3");
                   return o;
                 }});
  out.push_back({2, "Berman iteration converges to the envelope", [](const fs::path& d) {
                   Outcome o;
                   RunManifest m = run("berman-convergence", {{"N", "128"}, {"j_last", "16384"}}, d);
                   absorb(o, m);
                   report(o, m, "final_sup_dist");
                   report(o, m, "final_capacity_metric");
                   runtime_limit(o, m, 60.0);
                   return o;
                 }});
  out.push_back({3, "mu-envelope differs from the plain envelope", [](const fs::path& d) {
                   Outcome o;
                   RunManifest m = run("berman-convergence",
                                       {{"N", "128"},
                                        {"expect", "diverge"},
                                        {"obstacle", "stripe -1 0.5 0.5"},
                                        {"mu", "stripe-null 1 0.5 0.5"}},
                                       d);
                   absorb(o, m);
                   report(o, m, "berman_limit_sup_norm");
                   report(o, m, "limit_difference");
                   runtime_limit(o, m, 30.0);
                   return o;
                 }});
  out.push_back({4, "orthogonality for continuous and step obstacles", [](const fs::path& d) {
                   Outcome o;
                   RunManifest m = run("orthogonality", {{"N", "128"}, {"count", "20"}}, d);
                   absorb(o, m);
                   report(o, m, "continuous_max_abs_defect");
                   report(o, m, "step_defect");
                   report(o, m, "step_defect_refinement_drift");
                   return o;
                 }});
  out.push_back({5, "minimum principle partition defect", [](const fs::path& d) {
                   Outcome o;
                   RunManifest m = run("min-principle", {{"N", "256"}, {"pairs", "20"}}, d);
                   absorb(o, m);
                   report(o, m, "max_partition_defect");
                   return o;
                 }});
  out.push_back({6, "Perron family limit matches Newton", [](const fs::path& d) {
                   Outcome o;
                   const std::vector<std::pair<std::string, std::string>> configs = {
                       {"cosine 1 0.5", "disc-null 1 0.2"},
                       {"constant 1", "constant 1"},
                       {"constant 2", "cosine 1 0.5"},
                       {"cosine 1 0.5", "half-null 1 0.5"},
                       {"constant 1", "stripe-null 1 0.3 0.6"}};
                   double worst = 0.0, worst_order = 0.0;
                   for (std::size_t k = 0; k < configs.size(); ++k) {
                     RunManifest m = run("perron", {{"N", "128"}, {"theta", configs[k].first}, {"mu", configs[k].second}},
                                         d / ("config" + std::to_string(k)));
                     absorb(o, m, "config" + std::to_string(k) + ":");
                     if (const Check* c = find(m, "sup_error_vs_newton")) worst = std::max(worst, c->value);
                     if (const Check* c = find(m, "shuffled_order_gap")) worst_order = std::max(worst_order, c->value);
                   }
                   o.note("worst sup_error_vs_newton=" + fmt(worst));
                   o.note("worst shuffled_order_gap=" + fmt(worst_order));
                   return o;
                 }});
  out.push_back({7, "viscosity supersolution pipeline", [](const fs::path& d) {
                   Outcome o;
                   RunManifest m = run("theoremA", {{"N", "256"}}, d);
                   absorb(o, m);
                   double worst = -1e300;
                   for (const Check& c : m.checks)
                     if (c.name.rfind("residual_", 0) == 0) worst = std::max(worst, c.value);
                   o.note("worst residual=" + fmt(worst));
                   return o;
                 }});
  out.push_back({8, "envelope of a signed theta", [](const fs::path& d) {
                   Outcome o;
                   RunManifest m = run("weak-BD12", {{"N", "256"}, {"theta", "cosine 1 2"}}, d);
                   absorb(o, m);
                   report(o, m, "max_excess");
                   return o;
                 }});
  out.push_back({9, "quasi-triangle inequality", [](const fs::path& d) {
                   Outcome o;
                   RunManifest m = run("quasi-triangle", {{"trials", "1000"}, {"p", "0.5,1,2"}}, d);
                   absorb(o, m);
                   std::ifstream in(d / "quasi_triangle.json");
                   const nlohmann::json j = nlohmann::json::parse(in);
                   for (const auto& r : j.at("results"))
                     o.note("p=" + fmt(r.at("p").get<double>()) + " worst ratio " + fmt(r.at("worst_ratio").get<double>()) +
                            " vs C=" + fmt(r.at("constant").get<double>()));
                   return o;
                 }});
  out.push_back({10, "capacity sandwich", [](const fs::path& d) {
                   Outcome o;
                   RunManifest m = run("capacity-sandwich", {{"N", "32"}, {"t", "1,2,5"}, {"masks", "10"}}, d);
                   absorb(o, m);
                   report(o, m, "sandwich_defect");
                   return o;
                 }});
  out.push_back({11, "interior and closure local envelopes", [](const fs::path& d) {
                   Outcome o;
                   RunManifest m = run("local-envelopes", {{"interior", "0"}, {"boundary", "-1"}}, d);
                   absorb(o, m);
                   report(o, m, "interior_envelope_error");
                   report(o, m, "closure_envelope_error");
                   return o;
                 }});
  out.push_back({12, "mass bound for supersolutions", [](const fs::path& d) {
                   Outcome o;
                   RunManifest m = run("mass-bound", {{"seeds", "1000"}}, d);
                   absorb(o, m);
                   report(o, m, "random_supersolutions_found");
                   report(o, m, "witness_margin");
                   return o;
                 }});
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maenv acceptance suite"};
  std::string out_dir = "acceptance-runs";
  std::vector<int> only;
  app.add_option("--out", out_dir, "directory for scenario artifacts");
  app.add_option("--only", only, "criterion numbers to run");
  CLI11_PARSE(app, argc, argv);

  int failures = 0;
  for (const Criterion& c : criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const fs::path dir = fs::path(out_dir) / ("criterion" + std::to_string(c.id));
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body(dir);
    } catch (const std::exception& e) {
      o.passed = false;
      o.note(std::string("error: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.passed) ++failures;
    std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " [" << o.detail << "] ("
              << fmt(secs) << " s)" << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
