#include "maenv/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "maenv/errors.hpp"
#include "maenv/kernels.hpp"
#include "maenv/ma_equations.hpp"
#include "maenv/torus.hpp"

namespace maenv {
namespace {

ObstacleSolution psor_solve(const ThetaDensity& theta, const GridField& h, const Mask& constrained,
                            const PsorOptions& options) {
  require_same_grid(theta.density(), h);
  if (!h.all_finite()) throw InvalidArgument("psor_envelope: obstacle must be bounded");
  if (!(options.tol > 0.0)) throw InvalidArgument("psor_envelope: tol must be positive");
  const TorusGrid& grid = h.grid();
  const int n = grid.n();
  const double h2 = grid.h() * grid.h();
  const double omega = options.omega > 0.0 ? options.omega : 2.0 / (1.0 + std::sin(std::numbers::pi * grid.h()));
  // Displacement u* - u times kappa is the Monge-Ampere density.
  const double kappa = 4.0 / (kTwoPi * h2);

  std::vector<double> source(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) source[k] = kTwoPi * h2 * theta.density()[k];
  const kernels::PsorData data{source, h.values(), constrained};

  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (constrained.empty() || constrained[k]) top = std::max(top, h[k]);
  }
  GridField u(grid, top);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (constrained.empty() || constrained[k]) u[k] = h[k];
  }

  SolverReport report;
  report.method = "projected-sor";
  constexpr int kCheckEvery = 16;
  for (int it = 1;; ++it) {
    kernels::omp::psor_sweep(u.values(), data, n, omega);
    if (it % kCheckEvery != 0 && it != options.max_iter) continue;
    const double residual = kappa * kernels::omp::psor_residual(u.values(), data, n);
    report.iterations = it;
    report.residual = residual;
    report.residual_history.push_back(residual);
    if (residual <= options.tol) {
      report.converged = true;
      break;
    }
    if (it >= options.max_iter) {
      throw NonConvergence("psor_envelope: iteration cap reached, residual " + std::to_string(residual), report, u);
    }
  }

  ObstacleSolution out{u, Mask(grid.size(), 0), 0.0, {}};
  const double ctol = contact_tol(h);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out.contact[k] = (constrained.empty() || constrained[k]) && u[k] >= h[k] - ctol;
  }
  GridField gap = h - u;
  const GridField ma = ma_density(theta, u);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    gap[k] = (constrained.empty() || constrained[k]) ? gap[k] * ma[k] : 0.0;
  }
  out.complementarity_defect = integrate(gap);
  report.complementarity_defect = out.complementarity_defect;
  out.report = std::move(report);
  return out;
}

}  // namespace

double contact_tol(const GridField& h) {
  return 1e-6 * (1.0 + std::max(std::abs(h.min()), std::abs(h.max())));
}

ObstacleSolution psor_envelope(const ThetaDensity& theta, const GridField& h, const PsorOptions& options) {
  return psor_solve(theta, h, {}, options);
}

ObstacleSolution envelope_mu(const ThetaDensity& theta, const GridField& v, const MeasureDensity& mu,
                             const PsorOptions& options) {
  require_same_grid(v, mu.density());
  const Mask& support = mu.support();
  if (std::none_of(support.begin(), support.end(), [](char c) { return c != 0; })) {
    throw EmptySupport("envelope_mu: measure has empty support");
  }
  return psor_solve(theta, v, support, options);
}

PenalizationSchedule::PenalizationSchedule() : PenalizationSchedule(doubling(1.0, 16384.0)) {}

PenalizationSchedule::PenalizationSchedule(std::vector<double> j_values) : j_values_(std::move(j_values)) {
  if (j_values_.empty()) throw InvalidArgument("PenalizationSchedule: empty");
  for (std::size_t k = 0; k < j_values_.size(); ++k) {
    if (!std::isfinite(j_values_[k]) || !(j_values_[k] > 0.0)) {
      throw InvalidArgument("PenalizationSchedule: values must be positive and finite");
    }
    if (k > 0 && !(j_values_[k] > j_values_[k - 1])) {
      throw InvalidArgument("PenalizationSchedule: values must be strictly increasing");
    }
  }
}

PenalizationSchedule PenalizationSchedule::doubling(double first, double last) {
  std::vector<double> js;
  for (double j = first; j <= last * (1.0 + 1e-12); j *= 2.0) js.push_back(j);
  return PenalizationSchedule(std::move(js));
}

GridField berman_initial_guess(const GridField& v) {
  GridField low = v;
  for (double& x : low.values()) x = std::min(x, 0.0);
  GridField out(v.grid());
  for (int i = 0; i < v.n(); ++i) {
    for (int j = 0; j < v.n(); ++j) {
      out(i, j) = 0.25 * (low(i + 1, j) + low(i - 1, j) + low(i, j + 1) + low(i, j - 1));
    }
  }
  return out;
}

NewtonResult berman_step(const ThetaDensity& theta, const GridField& v, const MeasureDensity& mu, double j,
                         const GridField& init, const NewtonOptions& options) {
  if (!(j > 0.0)) throw InvalidArgument("berman_step: j must be positive");
  require_same_grid(theta.density(), v);
  const ExpTerm term{mu.density(), v, j};
  return solve_exponential_ma(theta, std::span<const ExpTerm>(&term, 1), init, options);
}

io::Table BermanRun::table() const {
  io::Table t{{"j", "sup_dist", "L1_dist", "min_slack", "newton_iters"}, {}};
  for (const auto& r : rows) t.rows.push_back({r.j, r.sup_dist, r.l1_dist, r.min_slack, double(r.newton_iters)});
  return t;
}

BermanRun berman_envelope(const ThetaDensity& theta, const GridField& v, const MeasureDensity& mu,
                          const PenalizationSchedule& schedule, const NewtonOptions& newton,
                          const PsorOptions& psor) {
  BermanRun run{{}, {}, {}, envelope_mu(theta, v, mu, psor).u, newton_ma_exponential(theta, mu, 1.0, newton).phi};
  const double inf_v = v.min();
  GridField current = berman_initial_guess(v);
  for (double j : schedule.j_values()) {
    NewtonResult step = berman_step(theta, v, mu, j, current, newton);
    current = step.phi;
    const Norms d = norms(current, run.oracle);
    run.rows.push_back({j, d.sup, d.l1, check_lower_bound(current, run.oracle, run.phi_fixed, j, inf_v),
                        step.report.iterations});
    run.reports.push_back(std::move(step.report));
    run.iterates.push_back(current);
  }
  return run;
}

double check_lower_bound(const GridField& phi_j, const GridField& env, const GridField& phi_fixed, double j,
                         double inf_v) {
  require_same_grid(phi_j, env);
  require_same_grid(phi_j, phi_fixed);
  if (!(j > 0.0)) throw InvalidArgument("check_lower_bound: j must be positive");
  double slack = std::numeric_limits<double>::infinity();
  const double shift = (inf_v - std::log(j)) / j;
  for (std::size_t k = 0; k < phi_j.size(); ++k) {
    const double bound = (1.0 - 1.0 / j) * env[k] + phi_fixed[k] / j + shift;
    slack = std::min(slack, phi_j[k] - bound);
  }
  return slack;
}

double orthogonality_defect(const ThetaDensity& theta, const GridField& h, const GridField& env) {
  require_same_grid(h, env);
  GridField integrand = ma_density(theta, env);
  for (std::size_t k = 0; k < integrand.size(); ++k) integrand[k] *= h[k] - env[k];
  return integrate(integrand);
}

}  // namespace maenv
