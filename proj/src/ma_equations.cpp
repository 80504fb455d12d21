#include "maenv/ma_equations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "maenv/errors.hpp"
#include "maenv/torus.hpp"

namespace maenv {
namespace {

NewtonResult solve_exponential_from(const ThetaDensity& theta, const GridField& mu, double beta, GridField init,
                                    const NewtonOptions& options) {
  const ExpTerm term{mu, GridField(mu.grid(), 0.0), beta};
  return solve_exponential_ma(theta, std::span<const ExpTerm>(&term, 1), std::move(init), options);
}

GridField constant_start(const ThetaDensity& theta, const GridField& mu, double beta) {
  const double mass = integrate(mu);
  return GridField(mu.grid(), std::log(theta.volume() / mass) / beta);
}

std::vector<double> continuation(double beta) {
  std::vector<double> betas;
  for (double b = 1.0; b < beta; b *= 2.0) betas.push_back(b);
  betas.push_back(beta);
  return betas;
}

Mask outer_ring(const TorusGrid& grid, const Mask& ball) {
  Mask ring(grid.size(), 0);
  for (int i = 0; i < grid.n(); ++i) {
    for (int j = 0; j < grid.n(); ++j) {
      if (ball[grid.index(i, j)]) continue;
      ring[grid.index(i, j)] = ball[grid.index(i + 1, j)] || ball[grid.index(i - 1, j)] ||
                               ball[grid.index(i, j + 1)] || ball[grid.index(i, j - 1)];
    }
  }
  return ring;
}

}  // namespace

NewtonResult newton_ma_exponential(const ThetaDensity& theta, const MeasureDensity& mu, double beta,
                                   const NewtonOptions& options) {
  if (!(beta > 0.0)) throw InvalidArgument("newton_ma_exponential: beta must be positive");
  require_same_grid(theta.density(), mu.density());
  return solve_exponential_from(theta, mu.density(), beta, constant_start(theta, mu.density(), beta), options);
}

ResidualReport supersolution_check(const ThetaDensity& theta, const GridField& psi, const MeasureDensity& mu,
                                   double tol) {
  const GridField ma = ma_density(theta, psi);
  ResidualReport r{false, -std::numeric_limits<double>::infinity(), 0};
  for (std::size_t k = 0; k < ma.size(); ++k) {
    const double d = ma[k] - std::exp(psi[k]) * mu.density()[k];
    if (d > r.worst) {
      r.worst = d;
      r.site = k;
    }
  }
  r.passed = r.worst <= tol;
  return r;
}

ResidualReport subsolution_check(const ThetaDensity& theta, const GridField& u, const MeasureDensity& mu,
                                 double tol) {
  const GridField ma = ma_density(theta, u);
  ResidualReport r{false, -std::numeric_limits<double>::infinity(), 0};
  for (std::size_t k = 0; k < ma.size(); ++k) {
    const double d = std::exp(u[k]) * mu.density()[k] - ma[k];
    if (d > r.worst) {
      r.worst = d;
      r.site = k;
    }
  }
  r.passed = r.worst <= tol;
  return r;
}

GridField ma_positive(const ThetaDensity& theta, const GridField& u) {
  GridField ma = ma_density(theta, u);
  for (double& x : ma.values()) x = std::max(x, 0.0);
  return ma;
}

NewtonResult solve_two_measure(const ThetaDensity& theta, const GridField& u, const GridField& v, double beta,
                               const NewtonOptions& options, double psh_tol) {
  if (!(beta > 0.0)) throw InvalidArgument("solve_two_measure: beta must be positive");
  require_same_grid(u, v);
  if (!is_theta_psh(theta, u, psh_tol).psh || !is_theta_psh(theta, v, psh_tol).psh) {
    throw InvalidArgument("solve_two_measure: u and v must be theta-psh");
  }
  std::vector<ExpTerm> terms{{ma_positive(theta, u), u, 1.0}, {ma_positive(theta, v), v, 1.0}};
  if (terms[0].weight.max() <= 0.0 && terms[1].weight.max() <= 0.0) {
    throw DegenerateData("solve_two_measure: both Monge-Ampere densities vanish");
  }
  GridField phi = pointwise_min(u, v);
  NewtonResult result{phi, {}};
  int total = 0;
  for (double b : continuation(beta)) {
    for (auto& t : terms) t.beta = b;
    result = solve_exponential_ma(theta, terms, result.phi, options);
    total += result.report.iterations;
  }
  result.report.iterations = total;
  return result;
}

PminResult pmin_compose(const ThetaDensity& theta, const GridField& u, const GridField& v, const PsorOptions& psor) {
  require_same_grid(u, v);
  const GridField obstacle = pointwise_min(u, v);
  PminResult out{psor_envelope(theta, obstacle, psor).u, GridField(u.grid()), 0.0};
  const double tol = contact_tol(obstacle);
  const GridField ma_phi = ma_density(theta, out.phi);
  const GridField ma_u = ma_density(theta, u);
  const GridField ma_v = ma_density(theta, v);
  out.max_defect = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < u.size(); ++k) {
    double allowed = 0.0;
    if (out.phi[k] >= u[k] - tol) allowed += ma_u[k];
    if (out.phi[k] >= v[k] - tol) allowed += ma_v[k];
    out.partition_defect[k] = ma_phi[k] - allowed;
    out.max_defect = std::max(out.max_defect, out.partition_defect[k]);
  }
  return out;
}

SupersolutionFamily SupersolutionFamily::from_members(std::vector<GridField> members) {
  auto shared = std::make_shared<std::vector<GridField>>(std::move(members));
  return SupersolutionFamily([shared](int index) -> std::optional<GridField> {
    if (index < 0 || static_cast<std::size_t>(index) >= shared->size()) return std::nullopt;
    return (*shared)[static_cast<std::size_t>(index)];
  });
}

std::optional<GridField> SupersolutionFamily::member(int index) {
  while (!exhausted_ && static_cast<int>(members_.size()) <= index) {
    auto next = generator_(static_cast<int>(members_.size()));
    if (!next) {
      exhausted_ = true;
      break;
    }
    members_.push_back(std::move(*next));
  }
  if (index < 0 || index >= static_cast<int>(members_.size())) return std::nullopt;
  return members_[static_cast<std::size_t>(index)];
}

SupersolutionFamily growing_mask_family(const ThetaDensity& theta, const MeasureDensity& mu, int count,
                                        const NewtonOptions& options) {
  if (count < 1) throw InvalidArgument("growing_mask_family: count must be positive");
  const TorusGrid grid = mu.grid();
  // Stripes are centred on the heaviest column of mu so every mask meets its support.
  const auto heaviest = static_cast<std::size_t>(
      std::max_element(mu.density().values().begin(), mu.density().values().end()) -
      mu.density().values().begin());
  const int centre = static_cast<int>(heaviest) / grid.n();
  auto masks = std::make_shared<std::vector<GridField>>();
  for (int k = 0; k < count; ++k) {
    const double radius = 0.5 * (k + 1) / count;
    GridField restricted = mu.density();
    for (int i = 0; i < grid.n(); ++i) {
      int d = std::abs(i - centre);
      d = std::min(d, grid.n() - d);
      if (static_cast<double>(d) / grid.n() > radius + 1e-12) {
        for (int j = 0; j < grid.n(); ++j) restricted(i, j) = 0.0;
      }
    }
    masks->push_back(std::move(restricted));
  }
  const ThetaDensity theta_copy = theta;
  return SupersolutionFamily([masks, theta_copy, options](int index) -> std::optional<GridField> {
    if (index < 0 || static_cast<std::size_t>(index) >= masks->size()) return std::nullopt;
    const GridField& weight = (*masks)[static_cast<std::size_t>(index)];
    return solve_exponential_from(theta_copy, weight, 1.0, constant_start(theta_copy, weight, 1.0), options).phi;
  });
}

GridField default_subsolution(const ThetaDensity& theta, const MeasureDensity& mu) {
  const double volume = theta.volume();
  GridField w = solve_poisson(theta, GridField(theta.grid(), volume));
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double m = mu.density()[k];
    if (m > 0.0) shift = std::max(shift, w[k] + std::log(m / volume));
  }
  return w - (shift + 1.0);
}

io::Table PerronResult::table() const {
  io::Table t{{"round", "member_id", "sup_gap", "supersolution_residual"}, {}};
  for (const auto& r : history) {
    t.rows.push_back({double(r.round), double(r.member_id), r.sup_gap, r.supersolution_residual});
  }
  return t;
}

PerronResult perron_solve(const ThetaDensity& theta, const MeasureDensity& mu, SupersolutionFamily& family,
                          const GridField& subsolution, const PerronOptions& options) {
  if (!subsolution_check(theta, subsolution, mu, options.check_tol).passed) {
    throw NoSubsolution("perron_solve: the provided function is not a subsolution");
  }
  std::vector<int> order = options.order;
  if (order.empty()) {
    for (int k = 0; k < options.max_members && family.member(k); ++k) order.push_back(k);
  }
  if (order.empty()) throw InvalidArgument("perron_solve: empty family");

  PerronResult result{GridField(theta.grid()), {}};
  std::optional<GridField> current;
  double last_gap = std::numeric_limits<double>::infinity();
  for (std::size_t round = 0; round < order.size(); ++round) {
    const int id = order[round];
    auto member = family.member(id);
    if (!member) throw InvalidArgument("perron_solve: no member " + std::to_string(id));
    const ResidualReport member_check = supersolution_check(theta, *member, mu, options.check_tol);
    if (!member_check.passed) {
      throw InvalidArgument("perron_solve: member " + std::to_string(id) + " is not a supersolution");
    }
    GridField next = current ? pmin_compose(theta, *current, *member, options.psor).phi : *member;
    const ResidualReport fold_check = supersolution_check(theta, next, mu, options.check_tol);
    if (!fold_check.passed) {
      throw Error("perron_solve: fold " + std::to_string(round) + " lost the supersolution property, residual " +
                  std::to_string(fold_check.worst));
    }
    last_gap = current ? norms(next, *current).sup : std::numeric_limits<double>::infinity();
    result.history.push_back({static_cast<int>(round), id, last_gap, fold_check.worst});
    current = std::move(next);
  }
  result.u = *current;
  const ResidualReport as_sub = subsolution_check(theta, result.u, mu, options.solution_tol);
  if (!as_sub.passed && !(last_gap <= options.tol)) {
    throw FamilyExhausted("perron_solve: family exhausted, last fold gap " + std::to_string(last_gap) +
                          ", subsolution residual " + std::to_string(as_sub.worst));
  }
  return result;
}

NewtonResult local_dirichlet_solve(const ThetaDensity& theta, const MeasureDensity& mu, const Mask& ball,
                                   const GridField& boundary_data, const NewtonOptions& options) {
  require_same_grid(theta.density(), boundary_data);
  if (ball.size() != boundary_data.size()) throw InvalidArgument("local_dirichlet_solve: mask size mismatch");
  const ExpTerm term{mu.density(), GridField(mu.grid(), 0.0), 1.0};
  return solve_exponential_ma(theta, std::span<const ExpTerm>(&term, 1), boundary_data, options, ball);
}

GlueResult glue_supersolution(const ThetaDensity& theta, const GridField& u_global, const GridField& v_local,
                              const Mask& ball, const MeasureDensity& mu, double tol, const PsorOptions& psor) {
  require_same_grid(u_global, v_local);
  if (ball.size() != u_global.size()) throw InvalidArgument("glue_supersolution: mask size mismatch");
  GridField psi = u_global;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    if (!ball[k]) continue;
    if (v_local[k] > u_global[k] + tol) {
      throw InvalidArgument("glue_supersolution: v_local exceeds u_global inside the ball");
    }
    psi[k] = v_local[k];
  }
  const Mask ring = outer_ring(u_global.grid(), ball);
  for (std::size_t k = 0; k < psi.size(); ++k) {
    if (ring[k] && v_local[k] < u_global[k] - tol) {
      throw BoundaryTraceViolation("glue_supersolution: v_local falls below u_global at the boundary, gap " +
                                   std::to_string(u_global[k] - v_local[k]));
    }
  }
  GlueResult out{psor_envelope(theta, psi, psor).u, {}};
  out.check = supersolution_check(theta, out.envelope, mu, tol);
  return out;
}

}  // namespace maenv
