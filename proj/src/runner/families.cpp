#include "families.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "maenv/errors.hpp"
#include "maenv/torus.hpp"

namespace maenv::runner {
namespace {

constexpr double kEdge = 1e-12;

const std::map<std::string, std::size_t>& arities(FamilyKind kind) {
  static const std::map<std::string, std::size_t> theta = {{"constant", 1}, {"cosine", 2}};
  static const std::map<std::string, std::size_t> measure = {
      {"constant", 1}, {"cosine", 2}, {"stripe-null", 3}, {"disc-null", 2}, {"half-null", 2}};
  static const std::map<std::string, std::size_t> obstacle = {
      {"constant", 1}, {"cosine", 2}, {"mix", 2}, {"stripe", 3}, {"open-stripe", 3}, {"ball-step", 2}};
  switch (kind) {
    case FamilyKind::theta:
      return theta;
    case FamilyKind::measure:
      return measure;
    default:
      return obstacle;
  }
}

double torus_dist2(double x, double y, double cx, double cy) {
  double dx = std::abs(x - cx), dy = std::abs(y - cy);
  dx = std::min(dx, 1.0 - dx);
  dy = std::min(dy, 1.0 - dy);
  return dx * dx + dy * dy;
}

}  // namespace

FamilySpec parse_family(const std::string& key, const std::string& text, FamilyKind kind) {
  std::istringstream in(text);
  FamilySpec spec;
  if (!(in >> spec.name)) throw ConfigError(key + ": empty family");
  const auto& table = arities(kind);
  const auto it = table.find(spec.name);
  if (it == table.end()) throw ConfigError(key + ": unknown family '" + spec.name + "'");
  std::string word;
  while (in >> word) {
    try {
      std::size_t used = 0;
      spec.args.push_back(std::stod(word, &used));
      if (used != word.size()) throw std::invalid_argument(word);
    } catch (const std::exception&) {
      throw ConfigError(key + ": '" + word + "' is not a number");
    }
  }
  if (spec.args.size() != it->second) {
    throw ConfigError(key + ": family '" + spec.name + "' takes " + std::to_string(it->second) + " numbers");
  }
  return spec;
}

ThetaDensity make_theta(const TorusGrid& grid, const FamilySpec& spec) {
  const auto& a = spec.args;
  if (spec.name == "constant") return ThetaDensity::constant(grid, a[0]);
  return ThetaDensity(GridField::sample(grid, [&](double x, double) { return a[0] + a[1] * std::cos(kTwoPi * x); }));
}

GridField make_measure(const TorusGrid& grid, const FamilySpec& spec) {
  const auto& a = spec.args;
  GridField out = GridField::sample(grid, [&](double x, double y) -> double {
    if (spec.name == "constant") return a[0];
    if (spec.name == "cosine") return a[0] + a[1] * std::cos(kTwoPi * x) * std::cos(kTwoPi * y);
    if (spec.name == "stripe-null") return (x >= a[1] - kEdge && x <= a[2] + kEdge) ? 0.0 : a[0];
    if (spec.name == "disc-null") return torus_dist2(x, y, 0.5, 0.5) < a[1] * a[1] ? 0.0 : a[0];
    return x > a[1] + kEdge ? 0.0 : a[0];
  });
  if (out.min() < 0.0) throw ConfigError("measure family '" + spec.name + "' is negative somewhere");
  return out;
}

Obstacle make_obstacle(const TorusGrid& grid, const FamilySpec& spec) {
  const auto& a = spec.args;
  // inside(x, y, closed) for the jump families.
  auto sample = [&](bool closed) {
    return GridField::sample(grid, [&](double x, double y) -> double {
      const double e = closed ? kEdge : -kEdge;
      if (spec.name == "constant") return a[0];
      if (spec.name == "cosine") return a[0] + a[1] * std::cos(kTwoPi * x) * std::cos(kTwoPi * y);
      if (spec.name == "mix") {
        const bool in = std::abs(x - 0.5) < 0.25 + e && std::abs(y - 0.5) < 0.25 + e;
        return a[0] * std::cos(kTwoPi * x) * std::sin(kTwoPi * y) + (in ? a[1] : 0.0);
      }
      if (spec.name == "stripe") return (x >= a[1] - kEdge && x <= a[2] + kEdge) ? a[0] : 0.0;
      if (spec.name == "open-stripe") return (x > a[1] - e && x < a[2] + e) ? a[0] : 0.0;
      return std::sqrt(torus_dist2(x, y, 0.5, 0.5)) < a[1] + e ? a[0] : 0.0;
    });
  };
  GridField open = sample(false);
  GridField closed = sample(true);
  return {open, pointwise_min(open, closed)};
}

}  // namespace maenv::runner
