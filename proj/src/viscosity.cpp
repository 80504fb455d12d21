#include "maenv/viscosity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "maenv/errors.hpp"
#include "maenv/newton.hpp"
#include "maenv/torus.hpp"

namespace maenv {

Rhs exp_rhs(const GridField& f) {
  return [f](std::size_t k, double u) { return std::exp(u) * f[k]; };
}

Rhs plain_rhs(const GridField& f) {
  return [f](std::size_t k, double) { return f[k]; };
}

ViscosityReport check_supersolution_visc(const ThetaDensity& theta, const GridField& v, const Rhs& rhs, double tol,
                                         double j_ic) {
  require_same_grid(theta.density(), v);
  if (!(tol >= 0.0)) throw InvalidArgument("check_supersolution_visc: tol must be nonnegative");
  ViscosityReport report;
  report.j_ic = j_ic > 0.0 ? j_ic : double(v.n());
  const GridField w = inf_convolution(v, report.j_ic);
  const GridField ma_v = ma_density(theta, v);
  const GridField ma_w = ma_density(theta, w);
  std::size_t direct = 0;
  report.worst_margin = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < v.size(); ++k) {
    const bool inactive = w[k] >= v[k];
    direct += inactive;
    const double lhs = std::max(inactive ? ma_v[k] : ma_w[k], 0.0);
    const double margin = lhs - rhs(k, inactive ? v[k] : w[k]);
    if (margin > report.worst_margin) {
      report.worst_margin = margin;
      report.worst_site = k;
    }
  }
  report.checked_fraction = double(direct) / double(v.size());
  report.passed = report.worst_margin <= tol;
  return report;
}

ViscosityReport check_supersolution_visc(const ThetaDensity& theta, const GridField& v, const GridField& f,
                                         double tol, double j_ic) {
  return check_supersolution_visc(theta, v, exp_rhs(f), tol, j_ic);
}

ViscosityReport check_subsolution_visc(const ThetaDensity& theta, const GridField& u, const Rhs& rhs, double tol) {
  require_same_grid(theta.density(), u);
  if (!(tol >= 0.0)) throw InvalidArgument("check_subsolution_visc: tol must be nonnegative");
  ViscosityReport report;
  const GridField ma = ma_density(theta, u);
  report.worst_margin = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double margin = std::max(rhs(k, u[k]) - ma[k], -ma[k]);
    if (margin > report.worst_margin) {
      report.worst_margin = margin;
      report.worst_site = k;
    }
  }
  report.passed = report.worst_margin <= tol;
  return report;
}

ViscosityReport check_subsolution_visc(const ThetaDensity& theta, const GridField& u, const GridField& f,
                                       double tol) {
  return check_subsolution_visc(theta, u, exp_rhs(f), tol);
}

PipelineResult theoremA_pipeline(const ThetaDensity& theta, const GridField& v, const GridField& f, double check_tol,
                                 const PsorOptions& psor) {
  require_same_grid(v, f);
  PipelineResult out{GridField(v.grid()), 0.0, check_supersolution_visc(theta, v, f, check_tol), {}};
  if (!out.input.passed) {
    throw InputNotSupersolution("theoremA_pipeline: input fails the supersolution test by " +
                                std::to_string(out.input.worst_margin) + " at site " +
                                std::to_string(out.input.worst_site));
  }
  ObstacleSolution env = psor_envelope(theta, v, psor);
  out.env = std::move(env.u);
  out.solver = std::move(env.report);
  const GridField ma = ma_density(theta, out.env);
  out.residual = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < ma.size(); ++k) out.residual = std::max(out.residual, ma[k] - std::exp(out.env[k]) * f[k]);
  return out;
}

bool mass_bound_check(const ThetaDensity& theta, const GridField& f, double tol) {
  require_same_grid(theta.density(), f);
  if (f.min() < 0.0) throw InvalidArgument("mass_bound_check: f must be nonnegative");
  return integrate(f) >= theta.volume() - tol;
}

GridField mass_bound_witness(const ThetaDensity& theta, const GridField& f) {
  const double total = integrate(f);
  if (!(total > 0.0) || f.min() < 0.0) throw InvalidArgument("mass_bound_witness: f must be nonnegative with positive mass");
  return solve_poisson(theta, (theta.volume() / total) * f);
}

SemicontinuityReport refined_semicontinuity_check(const GridField& v, double tol) {
  if (!(tol >= 0.0)) throw InvalidArgument("refined_semicontinuity_check: tol must be nonnegative");
  const double slack = tol * (1.0 + v.max() - v.min());
  SemicontinuityReport report;
  for (int i = 0; i < v.n(); ++i) {
    for (int j = 0; j < v.n(); ++j) {
      double low = std::numeric_limits<double>::infinity();
      for (int a = -1; a <= 1; ++a) {
        for (int b = -1; b <= 1; ++b) {
          if (a != 0 || b != 0) low = std::min(low, v(i + a, j + b));
        }
      }
      if (v(i, j) < low - slack) {
        if (report.passed) report.first_site = v.grid().index(i, j);
        report.passed = false;
        ++report.violations;
      }
    }
  }
  return report;
}

}  // namespace maenv
