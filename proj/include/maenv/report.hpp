#pragma once

#include <string>
#include <vector>

namespace maenv {

/// Diagnostics attached to every nonlinear or iterative solve.
struct SolverReport {
  std::string method;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;                ///< final residual (density units)
  std::vector<double> residual_history;  ///< one entry per iteration
  std::vector<double> damping_history;   ///< accepted step lengths (Newton only)
  double complementarity_defect = 0.0;   ///< obstacle solves only
};

}  // namespace maenv
