#pragma once

// Discrete viscosity tests for  (theta + dd^c u)_+ <= F(x, u)  and the reverse inequality.

#include <cstddef>
#include <functional>

#include "maenv/envelope.hpp"
#include "maenv/grid.hpp"

namespace maenv {

/// Right-hand side F(site, value), nondecreasing in value.
using Rhs = std::function<double(std::size_t site, double value)>;

/// e^u f.
Rhs exp_rhs(const GridField& f);
/// f, independent of u.
Rhs plain_rhs(const GridField& f);

struct ViscosityReport {
  bool passed = false;
  std::size_t worst_site = 0;
  double worst_margin = 0.0;      ///< max over sites of lhs - rhs (super) or rhs - lhs (sub)
  double checked_fraction = 1.0;  ///< share of sites tested on v itself rather than its inf-convolution
  double j_ic = 0.0;
};

/// max(theta + curvature(v), 0) <= F + tol. Sites where the inf-convolution with weight j_ic
/// (0 selects N) changes v are tested on the regularised field.
ViscosityReport check_supersolution_visc(const ThetaDensity& theta, const GridField& v, const Rhs& rhs, double tol,
                                         double j_ic = 0.0);
ViscosityReport check_supersolution_visc(const ThetaDensity& theta, const GridField& v, const GridField& f,
                                         double tol, double j_ic = 0.0);

/// theta + curvature(u) >= F - tol, and u theta-psh.
ViscosityReport check_subsolution_visc(const ThetaDensity& theta, const GridField& u, const Rhs& rhs, double tol);
ViscosityReport check_subsolution_visc(const ThetaDensity& theta, const GridField& u, const GridField& f,
                                       double tol);

struct PipelineResult {
  GridField env;
  double residual = 0.0;  ///< max of ma(env) - e^env f
  ViscosityReport input;
  SolverReport solver;
};

/// P(v) of a viscosity supersolution and its pluripotential residual. Throws InputNotSupersolution.
PipelineResult theoremA_pipeline(const ThetaDensity& theta, const GridField& v, const GridField& f,
                                 double check_tol = 1e-8, const PsorOptions& psor = {});

/// integrate(f) >= V - tol.
bool mass_bound_check(const ThetaDensity& theta, const GridField& f, double tol = 1e-9);

/// u with theta + curvature(u) = V f / integrate(f); a supersolution of (theta + dd^c u)_+ <= f
/// whenever integrate(f) >= V.
GridField mass_bound_witness(const ThetaDensity& theta, const GridField& f);

struct SemicontinuityReport {
  bool passed = true;
  std::size_t violations = 0;
  std::size_t first_site = 0;
};

/// v(a) >= min over the 8 neighbours of v - tol (1 + osc v) at every site. tol must dominate
/// the O(h^2) dip of a smooth field at its discrete minima.
SemicontinuityReport refined_semicontinuity_check(const GridField& v, double tol);

}  // namespace maenv
