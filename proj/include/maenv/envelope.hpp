#pragma once

// Two independent routes to theta-psh envelopes on the torus: a projected SOR
// solve of the obstacle problem (the oracle) and the penalisation scheme
//
//     theta + curvature(phi_j) = exp(j (phi_j - v)) mu,     j -> infinity.

#include <vector>

#include "maenv/grid.hpp"
#include "maenv/io.hpp"
#include "maenv/newton.hpp"
#include "maenv/report.hpp"

namespace maenv {

/// P(h): u <= h, theta + curvature(u) >= 0, with complementarity.
struct ObstacleSolution {
  GridField u;
  Mask contact;  ///< u >= h - contact_tol
  double complementarity_defect = 0.0;
  SolverReport report;
};

struct PsorOptions {
  double tol = 1e-9;  ///< natural LCP residual, density units
  int max_iter = 400000;
  double omega = 0.0;  ///< 0 selects 2 / (1 + sin(pi h))
};

/// 1e-6 * (1 + sup|h|).
double contact_tol(const GridField& h);

ObstacleSolution psor_envelope(const ThetaDensity& theta, const GridField& h, const PsorOptions& options = {});

/// P_{theta,mu}(v): the obstacle is imposed only on the support of mu. Throws EmptySupport.
ObstacleSolution envelope_mu(const ThetaDensity& theta, const GridField& v, const MeasureDensity& mu,
                             const PsorOptions& options = {});

class PenalizationSchedule {
 public:
  /// 1, 2, 4, ..., 2^14.
  PenalizationSchedule();
  explicit PenalizationSchedule(std::vector<double> j_values);
  static PenalizationSchedule doubling(double first, double last);

  const std::vector<double>& j_values() const noexcept { return j_values_; }

 private:
  std::vector<double> j_values_;
};

/// One penalised solve, warm-started at `init`.
NewtonResult berman_step(const ThetaDensity& theta, const GridField& v, const MeasureDensity& mu, double j,
                         const GridField& init, const NewtonOptions& options = {});

/// Starting point for the first penalised solve: min(v, 0) after one Jacobi averaging sweep.
GridField berman_initial_guess(const GridField& v);

struct BermanRow {
  double j = 0.0;
  double sup_dist = 0.0;
  double l1_dist = 0.0;
  double min_slack = 0.0;
  int newton_iters = 0;
};

struct BermanRun {
  std::vector<GridField> iterates;
  std::vector<BermanRow> rows;
  std::vector<SolverReport> reports;
  GridField oracle;     ///< P_{theta,mu}(v) from PSOR
  GridField phi_fixed;  ///< solution of theta + curvature(phi) = e^phi mu

  /// Columns j, sup_dist, L1_dist, min_slack, newton_iters.
  io::Table table() const;
};

BermanRun berman_envelope(const ThetaDensity& theta, const GridField& v, const MeasureDensity& mu,
                          const PenalizationSchedule& schedule, const NewtonOptions& newton = {},
                          const PsorOptions& psor = {});

/// min over the grid of
///   phi_j - [(1 - 1/j) env + phi_fixed / j + (inf_v - log j) / j].
double check_lower_bound(const GridField& phi_j, const GridField& env, const GridField& phi_fixed, double j,
                         double inf_v);

/// integrate((h - env) * ma_density(theta, env)).
double orthogonality_defect(const ThetaDensity& theta, const GridField& h, const GridField& env);

}  // namespace maenv
