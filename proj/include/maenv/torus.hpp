#pragma once

// Differential geometry of complex dimension one on the flat torus. With the
// normalisation dd^c = Laplacian / (2 pi) the Monge-Ampere density of a
// theta-psh function is  theta + curvature(u)  and its total mass is V.

#include <numbers>

#include "maenv/grid.hpp"

namespace maenv {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// (1 / 2pi) times the periodic 5-point Laplacian.
GridField curvature(const GridField& u);

/// theta + curvature(u).
GridField ma_density(const ThetaDensity& theta, const GridField& u);

/// h^2-weighted sum in row-major order; the serial order is part of the contract.
double integrate(const GridField& f);

struct PshReport {
  bool psh = false;
  double min_density = 0.0;
  int i = 0;
  int j = 0;
};

/// theta-psh test: min over the grid of ma_density(theta, u) >= -tol.
PshReport is_theta_psh(const ThetaDensity& theta, const GridField& u, double tol);

/// x -> min_z u(z) + j * dist_torus(x, z)^2 over grid points z.
GridField inf_convolution(const GridField& u, double j);

struct Norms {
  double sup = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
};

/// Norms of u - v; L1 and L2 carry the h^2 weight.
Norms norms(const GridField& u, const GridField& v);

}  // namespace maenv
