#pragma once

// Named analytic field families used in scenario configs.

#include <string>
#include <vector>

#include "maenv/grid.hpp"

namespace maenv::runner {

struct FamilySpec {
  std::string name;
  std::vector<double> args;
};

enum class FamilyKind { theta, measure, obstacle };

/// Throws ConfigError naming `key` when the name is unknown or the argument count is wrong.
FamilySpec parse_family(const std::string& key, const std::string& text, FamilyKind kind);

ThetaDensity make_theta(const TorusGrid& grid, const FamilySpec& spec);
GridField make_measure(const TorusGrid& grid, const FamilySpec& spec);

struct Obstacle {
  GridField value;
  GridField lower;  ///< lower semicontinuous samples, differs from value on jump sets
};

Obstacle make_obstacle(const TorusGrid& grid, const FamilySpec& spec);

}  // namespace maenv::runner
