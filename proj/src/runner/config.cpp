#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "families.hpp"
#include "maenv/errors.hpp"
#include "maenv/runner.hpp"

namespace maenv::runner {
namespace {

enum class Type { integer, real, tolerance, text, list, theta, measure, obstacle, choice };

struct Key {
  std::string name;
  Type type;
  std::string fallback;
  std::vector<std::string> choices = {};
};

using Schema = std::vector<Key>;

const std::map<std::string, Schema>& schemas() {
  static const std::map<std::string, Schema> table = {
      {"berman-convergence",
       {{"N", Type::integer, "128"},
        {"theta", Type::theta, "constant 1"},
        {"mu", Type::measure, "constant 1"},
        {"obstacle", Type::obstacle, "mix 0.3 -1"},
        {"j_first", Type::real, "1"},
        {"j_last", Type::real, "16384"},
        {"newton_tol", Type::tolerance, "1e-10"},
        {"psor_tol", Type::tolerance, "1e-9"},
        {"cap_eps", Type::tolerance, "1e-2"},
        {"expect", Type::choice, "converge", {"converge", "diverge"}}}},
      {"orthogonality",
       {{"N", Type::integer, "128"},
        {"theta", Type::theta, "constant 1"},
        {"count", Type::integer, "20"},
        {"amplitude", Type::real, "1"},
        {"step", Type::obstacle, "open-stripe -1 0.25 0.75"},
        {"psor_tol", Type::tolerance, "1e-9"}}},
      {"radial-ball",
       {{"M", Type::integer, "4096"}, {"half_width", Type::real, "40"}, {"dims", Type::list, "1,2,3"}}},
      {"min-principle",
       {{"N", Type::integer, "128"},
        {"theta", Type::theta, "constant 1"},
        {"pairs", Type::integer, "20"},
        {"psor_tol", Type::tolerance, "1e-9"}}},
      {"perron",
       {{"N", Type::integer, "128"},
        {"theta", Type::theta, "cosine 1 0.5"},
        {"mu", Type::measure, "disc-null 1 0.2"},
        {"members", Type::integer, "6"},
        {"tol", Type::tolerance, "1e-3"},
        {"solution_tol", Type::tolerance, "1e-6"},
        {"check_tol", Type::tolerance, "1e-7"},
        {"psor_tol", Type::tolerance, "1e-9"}}},
      {"theoremA",
       {{"N", Type::integer, "128"},
        {"theta", Type::theta, "constant 1"},
        {"f", Type::measure, "cosine 1 0.5"},
        {"ic_j", Type::real, "50"},
        {"check_tol", Type::tolerance, "1e-8"},
        {"psor_tol", Type::tolerance, "1e-9"}}},
      {"weak-BD12",
       {{"N", Type::integer, "128"}, {"theta", Type::theta, "cosine 1 2"}, {"psor_tol", Type::tolerance, "1e-9"}}},
      {"capacity-sandwich",
       {{"N", Type::integer, "32"},
        {"theta", Type::theta, "constant 1"},
        {"t", Type::list, "1,2,5"},
        {"masks", Type::integer, "10"},
        {"max_width", Type::integer, "5"},
        {"ipm_tol", Type::tolerance, "1e-12"}}},
      {"quasi-triangle",
       {{"N", Type::integer, "32"},
        {"theta", Type::theta, "constant 1"},
        {"trials", Type::integer, "1000"},
        {"p", Type::list, "0.5,1,2"}}},
      {"local-envelopes",
       {{"M", Type::integer, "512"},
        {"t_min", Type::real, "-10"},
        {"interior", Type::real, "0"},
        {"boundary", Type::real, "-1"}}},
      {"mass-bound",
       {{"N", Type::integer, "64"},
        {"theta", Type::theta, "constant 1"},
        {"seeds", Type::integer, "1000"},
        {"f_low", Type::measure, "constant 0.5"},
        {"f_high", Type::measure, "constant 2"},
        {"check_tol", Type::tolerance, "1e-9"}}},
  };
  return table;
}

const Key* find_key(const std::string& scenario, const std::string& name) {
  static const Key seed{"seed", Type::integer, "0"};
  if (name == "seed") return &seed;
  for (const Key& k : schemas().at(scenario)) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": '" + text + "' is not a finite number");
}

void validate(const std::string& scenario, const Key& key, const std::string& text) {
  switch (key.type) {
    case Type::integer: {
      const double v = parse_real(key.name, text);
      if (v != std::floor(v) || v < 0.0) throw ConfigError(key.name + ": expected a nonnegative integer");
      break;
    }
    case Type::real:
      parse_real(key.name, text);
      break;
    case Type::tolerance:
      if (!(parse_real(key.name, text) > 0.0)) throw ConfigError(key.name + ": tolerance must be positive");
      break;
    case Type::list: {
      std::stringstream ss(text);
      std::string item;
      int count = 0;
      while (std::getline(ss, item, ',')) {
        parse_real(key.name, trim(item));
        ++count;
      }
      if (count == 0) throw ConfigError(key.name + ": empty list");
      break;
    }
    case Type::theta:
      parse_family(key.name, text, FamilyKind::theta);
      break;
    case Type::measure:
      parse_family(key.name, text, FamilyKind::measure);
      break;
    case Type::obstacle:
      parse_family(key.name, text, FamilyKind::obstacle);
      break;
    case Type::choice:
      if (std::find(key.choices.begin(), key.choices.end(), text) == key.choices.end()) {
        throw ConfigError(key.name + ": '" + text + "' is not a valid choice for " + scenario);
      }
      break;
    case Type::text:
      break;
  }
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {
      "radial-ball",   "berman-convergence", "orthogonality", "min-principle",
      "perron",        "theoremA",           "weak-BD12",     "capacity-sandwich",
      "quasi-triangle", "local-envelopes",   "mass-bound"};
  return names;
}

ScenarioConfig ScenarioConfig::defaults(const std::string& scenario) {
  const auto it = schemas().find(scenario);
  if (it == schemas().end()) throw ConfigError("scenario: unknown scenario '" + scenario + "'");
  ScenarioConfig c;
  c.scenario_ = scenario;
  c.values_["seed"] = "0";
  for (const Key& k : it->second) c.values_[k.name] = k.fallback;
  return c;
}

ScenarioConfig ScenarioConfig::parse(std::istream& in, const std::string& source) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::string scenario;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "scenario") {
      scenario = value;
    } else {
      entries.emplace_back(key, value);
    }
  }
  if (scenario.empty()) throw ConfigError("scenario: missing in " + source);
  ScenarioConfig c = defaults(scenario);
  for (const auto& [k, v] : entries) c.set(k, v);
  return c;
}

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  return parse(in, path.string());
}

void ScenarioConfig::set(const std::string& key, const std::string& value) {
  const Key* k = find_key(scenario_, key);
  if (!k) throw ConfigError(key + ": unknown key for scenario " + scenario_);
  validate(scenario_, *k, value);
  values_[key] = value;
}

void ScenarioConfig::apply_environment() {
  if (const char* seed = std::getenv("MAENV_SEED")) set("seed", seed);
}

int ScenarioConfig::get_int(const std::string& key) const { return int(get_double(key)); }

double ScenarioConfig::get_double(const std::string& key) const { return parse_real(key, get_string(key)); }

std::uint64_t ScenarioConfig::get_seed() const { return std::stoull(get_string("seed")); }

const std::string& ScenarioConfig::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(key + ": not a key of scenario " + scenario_);
  return it->second;
}

std::vector<double> ScenarioConfig::get_list(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(get_string(key));
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(key, trim(item)));
  return out;
}

std::string ScenarioConfig::canonical() const {
  std::string out = "scenario = " + scenario_ + "\n";
  for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
  return out;
}

std::string ScenarioConfig::hash() const { return sha256_hex(canonical()); }

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr)) {
    throw Error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

}  // namespace maenv::runner
