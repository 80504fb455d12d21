#pragma once

// Damped Newton solver for the semilinear equations
//
//     theta + curvature(phi) = sum_k weight_k * exp(beta_k * (phi - offset_k))
//
// on the torus, optionally with phi prescribed outside a mask of free sites
// (local Dirichlet problems). The right-hand side is nondecreasing in phi, so
// every Jacobian is  -c Laplacian + nonnegative diagonal.

#include <cmath>
#include <span>

#include "maenv/grid.hpp"
#include "maenv/report.hpp"

namespace maenv {

struct ExpTerm {
  GridField weight;
  GridField offset;
  double beta = 1.0;
};

struct NewtonOptions {
  double tol = 1e-10;  ///< per-site |F| <= tol * (1 + |rhs|)
  int max_iter = 200;
  double armijo = 1e-4;
  double backtrack = 0.5;
  double min_step = std::ldexp(1.0, -20);
  double max_update = 10.0;  ///< sup-norm cap on a single Newton step
};

struct NewtonResult {
  GridField phi;
  SolverReport report;
};

/// theta + curvature(phi) - sum of the exponential terms.
GridField exponential_ma_residual(const ThetaDensity& theta, std::span<const ExpTerm> terms,
                                  const GridField& phi);

/// Throws NewtonStall when the line search falls below min_step and
/// NonConvergence when max_iter is exhausted. `free_sites` empty = all free.
NewtonResult solve_exponential_ma(const ThetaDensity& theta, std::span<const ExpTerm> terms,
                                  GridField init, const NewtonOptions& options = {},
                                  const Mask& free_sites = {});

/// Mean-zero w with  theta + curvature(w) = target; requires integrate(target) = V.
GridField solve_poisson(const ThetaDensity& theta, const GridField& target);

}  // namespace maenv
