#include "maenv/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace maenv::kernels {
namespace {

inline std::size_t at(int i, int j, int n) { return static_cast<std::size_t>(i) * n + j; }
inline int up(int i, int n) { return i + 1 == n ? 0 : i + 1; }
inline int down(int i, int n) { return i == 0 ? n - 1 : i - 1; }

inline double neighbour_sum(std::span<const double> u, int i, int j, int n) {
  return u[at(up(i, n), j, n)] + u[at(down(i, n), j, n)] + u[at(i, up(j, n), n)] +
         u[at(i, down(j, n), n)];
}

inline double periodic_dist(int a, int b, int n) {
  int d = std::abs(a - b);
  return static_cast<double>(std::min(d, n - d)) / n;
}

inline bool is_constrained(const PsorData& d, std::size_t k) {
  return d.constrained.empty() || d.constrained[k] != 0;
}

inline double relax_site(std::span<double> u, const PsorData& d, int i, int j, int n,
                         double omega) {
  const std::size_t k = at(i, j, n);
  const double ustar = 0.25 * (neighbour_sum(u, i, j, n) + d.source[k]);
  double next = u[k] + omega * (ustar - u[k]);
  if (is_constrained(d, k)) next = std::min(next, d.obstacle[k]);
  const double change = std::abs(next - u[k]);
  u[k] = next;
  return change;
}

}  // namespace

namespace serial {

void laplacian(std::span<const double> u, std::span<double> out, int n) {
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out[at(i, j, n)] = neighbour_sum(u, i, j, n) - 4.0 * u[at(i, j, n)];
  }
}

void inf_convolution(std::span<const double> u, std::span<double> out, int n, double j) {
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double best = std::numeric_limits<double>::infinity();
      for (int p = 0; p < n; ++p) {
        const double dx = periodic_dist(a, p, n);
        for (int q = 0; q < n; ++q) {
          const double dy = periodic_dist(b, q, n);
          best = std::min(best, u[at(p, q, n)] + j * (dx * dx + dy * dy));
        }
      }
      out[at(a, b, n)] = best;
    }
  }
}

double psor_sweep(std::span<double> u, const PsorData& data, int n, double omega) {
  double largest = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) largest = std::max(largest, relax_site(u, data, i, j, n, omega));
  }
  return largest;
}

}  // namespace serial

namespace omp {

void laplacian(std::span<const double> u, std::span<double> out, int n) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out[at(i, j, n)] = neighbour_sum(u, i, j, n) - 4.0 * u[at(i, j, n)];
  }
}

void inf_convolution(std::span<const double> u, std::span<double> out, int n, double j) {
  std::vector<double> weight(n);
  for (int d = 0; d < n; ++d) {
    const double dist = periodic_dist(0, d, n);
    weight[d] = j * dist * dist;
  }
  std::vector<double> pass(u.size());
#pragma omp parallel for schedule(static)
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double best = std::numeric_limits<double>::infinity();
      for (int q = 0; q < n; ++q) {
        best = std::min(best, u[at(a, q, n)] + weight[std::abs(b - q)]);
      }
      pass[at(a, b, n)] = best;
    }
  }
#pragma omp parallel for schedule(static)
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double best = std::numeric_limits<double>::infinity();
      for (int p = 0; p < n; ++p) {
        best = std::min(best, pass[at(p, b, n)] + weight[std::abs(a - p)]);
      }
      out[at(a, b, n)] = best;
    }
  }
}

double psor_sweep(std::span<double> u, const PsorData& data, int n, double omega) {
  double largest = 0.0;
  for (int colour = 0; colour < 2; ++colour) {
#pragma omp parallel for schedule(static) reduction(max : largest)
    for (int i = 0; i < n; ++i) {
      for (int j = (i + colour) % 2; j < n; j += 2) {
        largest = std::max(largest, relax_site(u, data, i, j, n, omega));
      }
    }
  }
  return largest;
}

double psor_residual(std::span<const double> u, const PsorData& data, int n) {
  double worst = 0.0;
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::size_t k = at(i, j, n);
      const double slack = 0.25 * (neighbour_sum(u, i, j, n) + data.source[k]) - u[k];
      const double r = is_constrained(data, k) ? std::min(data.obstacle[k] - u[k], slack) : slack;
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

}  // namespace omp

}  // namespace maenv::kernels
