#include "maenv/torus.hpp"

#include <algorithm>
#include <cmath>

#include "maenv/errors.hpp"
#include "maenv/kernels.hpp"

namespace maenv {

GridField curvature(const GridField& u) {
  GridField out(u.grid());
  kernels::omp::laplacian(u.values(), out.values(), u.n());
  const double scale = 1.0 / (kTwoPi * u.grid().h() * u.grid().h());
  out *= scale;
  return out;
}

GridField ma_density(const ThetaDensity& theta, const GridField& u) {
  require_same_grid(theta.density(), u);
  GridField out = curvature(u);
  out += theta.density();
  return out;
}

double integrate(const GridField& f) {
  double sum = 0.0;
  for (double v : f.values()) sum += v;
  const double h = f.grid().h();
  return sum * h * h;
}

PshReport is_theta_psh(const ThetaDensity& theta, const GridField& u, double tol) {
  if (tol < 0.0) throw InvalidArgument("is_theta_psh: tol must be >= 0");
  const GridField ma = ma_density(theta, u);
  PshReport report;
  report.min_density = ma[0];
  for (int i = 0; i < u.n(); ++i) {
    for (int j = 0; j < u.n(); ++j) {
      if (ma(i, j) < report.min_density) {
        report.min_density = ma(i, j);
        report.i = i;
        report.j = j;
      }
    }
  }
  report.psh = report.min_density >= -tol;
  return report;
}

GridField inf_convolution(const GridField& u, double j) {
  if (!(j > 0.0)) throw InvalidArgument("inf_convolution: j must be positive");
  GridField out(u.grid());
  kernels::omp::inf_convolution(u.values(), out.values(), u.n(), j);
  return out;
}

Norms norms(const GridField& u, const GridField& v) {
  require_same_grid(u, v);
  Norms out;
  double l1 = 0.0;
  double l2 = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double d = std::abs(u[k] - v[k]);
    out.sup = std::max(out.sup, d);
    l1 += d;
    l2 += d * d;
  }
  const double h2 = u.grid().h() * u.grid().h();
  out.l1 = l1 * h2;
  out.l2 = std::sqrt(l2 * h2);
  return out;
}

}  // namespace maenv
