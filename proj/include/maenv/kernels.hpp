#pragma once

// Grid kernels in two flavours. `omp::` is what the library calls; `serial::`
// is the straightforward reference used by the tests and the benchmark.
// Laplacian kernels return the unscaled 5-point sum  sum(neighbours) - 4 u.

#include <span>

namespace maenv::kernels {

/// Data of one projected relaxation sweep for  u <= obstacle,  u <= (sum(nbrs) + source) / 4.
/// `constrained` may be empty, meaning every site carries the obstacle.
struct PsorData {
  std::span<const double> source;
  std::span<const double> obstacle;
  std::span<const char> constrained;
};

namespace serial {

void laplacian(std::span<const double> u, std::span<double> out, int n);

/// Direct O(N^4) scan of  min_z u(z) + j * dist_torus(x, z)^2.
void inf_convolution(std::span<const double> u, std::span<double> out, int n, double j);

/// Lexicographic projected SOR sweep; returns the largest update magnitude.
double psor_sweep(std::span<double> u, const PsorData& data, int n, double omega);

}  // namespace serial

namespace omp {

void laplacian(std::span<const double> u, std::span<double> out, int n);

/// Separable O(N^3) evaluation: one pass along y, then one along x.
void inf_convolution(std::span<const double> u, std::span<double> out, int n, double j);

/// Red-black projected SOR sweep; each colour is updated in parallel.
double psor_sweep(std::span<double> u, const PsorData& data, int n, double omega);

/// Natural LCP residual  max_k |min(obstacle_k - u_k, ustar_k - u_k)|  (displacement units).
double psor_residual(std::span<const double> u, const PsorData& data, int n);

}  // namespace omp

}  // namespace maenv::kernels
