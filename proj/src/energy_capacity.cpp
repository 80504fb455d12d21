#include "maenv/energy_capacity.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "maenv/errors.hpp"
#include "maenv/torus.hpp"

namespace maenv {
namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

SparseMatrix curvature_matrix(const TorusGrid& grid) {
  const int n = grid.n();
  const double c = 1.0 / (kTwoPi * grid.h() * grid.h());
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(grid.size() * 5);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int k = int(grid.index(i, j));
      t.emplace_back(k, k, -4.0 * c);
      t.emplace_back(k, int(grid.index(i + 1, j)), c);
      t.emplace_back(k, int(grid.index(i - 1, j)), c);
      t.emplace_back(k, int(grid.index(i, j + 1)), c);
      t.emplace_back(k, int(grid.index(i, j - 1)), c);
    }
  }
  SparseMatrix l(Eigen::Index(grid.size()), Eigen::Index(grid.size()));
  l.setFromTriplets(t.begin(), t.end());
  return l;
}

Vector to_vector(const GridField& f) { return Eigen::Map<const Vector>(f.values().data(), Eigen::Index(f.size())); }

double mass_on(const ThetaDensity& theta, const GridField& u, const Mask& e) {
  GridField ma = ma_density(theta, u);
  for (std::size_t k = 0; k < ma.size(); ++k) ma[k] = e[k] ? ma[k] : 0.0;
  return integrate(ma);
}

double max_step(const Vector& x, const Vector& dx) {
  double a = 1.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (dx[i] < 0.0) a = std::min(a, -x[i] / dx[i]);
  }
  return a;
}

// Mehrotra predictor-corrector for
//   maximise w^T u  subject to  u - low >= 0,  high - u >= 0,  theta + L u >= 0.
// The normal equations D1 + D2 + L D3 L are factored with a sparse LDL^T.
CapacityResult interior_point(const ThetaDensity& theta, const GridField& low, const GridField& high,
                              const Mask& e, const CapacityOptions& options) {
  const TorusGrid& grid = theta.grid();
  const Eigen::Index n = Eigen::Index(grid.size());
  const double h2 = grid.h() * grid.h();
  const SparseMatrix l = curvature_matrix(grid);
  Vector indicator = Vector::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) indicator[k] = e[k] ? 1.0 : 0.0;
  const Vector w = h2 * (l * indicator);
  const Vector lo = to_vector(low);
  const Vector hi = to_vector(high);
  const Vector th = to_vector(theta.density());
  double constant = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) constant += h2 * th[k] * indicator[k];

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.25, 0.75);
  std::uniform_real_distribution<double> dual(0.5, 1.5);
  Vector u(n), z1(n), z2(n), z3(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    u[k] = lo[k] + unit(rng) * (hi[k] - lo[k]);
    z1[k] = h2 * dual(rng);
    z2[k] = h2 * dual(rng);
    z3[k] = h2 * dual(rng);
  }
  auto positive = [](Vector v, double floor) {
    for (auto& x : v) x = std::max(x, floor);
    return v;
  };
  Vector s1 = positive(u - lo, 1e-2), s2 = positive(hi - u, 1e-2), s3 = positive(th + l * u, 1e-2);

  const double scale_p = 1.0 + std::max({lo.lpNorm<Eigen::Infinity>(), hi.lpNorm<Eigen::Infinity>(),
                                         th.lpNorm<Eigen::Infinity>()});
  const double scale_d = 1.0 + w.lpNorm<Eigen::Infinity>();
  const double m = 3.0 * double(n);

  Eigen::SimplicialLDLT<SparseMatrix> solver;
  bool analysed = false;
  SolverReport report;
  report.method = "interior-point";

  for (int it = 1; it <= options.max_iter; ++it) {
    const Vector rp1 = u - lo - s1;
    const Vector rp2 = hi - u - s2;
    const Vector rp3 = th + l * u - s3;
    const Vector rd = w + z1 - z2 + l * z3;
    const double gap = s1.dot(z1) + s2.dot(z2) + s3.dot(z3);
    const double objective = w.dot(u) + constant;
    const double pinf = std::max({rp1.lpNorm<Eigen::Infinity>(), rp2.lpNorm<Eigen::Infinity>(),
                                  rp3.lpNorm<Eigen::Infinity>()}) / scale_p;
    const double dinf = rd.lpNorm<Eigen::Infinity>() / scale_d;
    report.iterations = it;
    report.residual = gap / (1.0 + std::abs(objective));
    report.residual_history.push_back(report.residual);
    if (report.residual <= options.tol && pinf <= 1e-11 && dinf <= 1e-11) {
      report.converged = true;
      report.complementarity_defect = gap;
      GridField witness(grid, std::vector<double>(u.data(), u.data() + n));
      return {objective, CapacityMode::exact, std::move(witness), std::move(report)};
    }

    const Vector d1 = z1.cwiseQuotient(s1), d2 = z2.cwiseQuotient(s2), d3 = z3.cwiseQuotient(s3);
    SparseMatrix normal = SparseMatrix(l.transpose()) * d3.asDiagonal() * l;
    normal += SparseMatrix((d1 + d2).asDiagonal());
    if (!analysed) {
      solver.analyzePattern(normal);
      analysed = true;
    }
    solver.factorize(normal);
    if (solver.info() != Eigen::Success) throw Error("capacity: normal equations are singular");

    // rc = complementarity target residual; returns (du, ds, dz) for the three blocks.
    struct Direction {
      Vector du, ds1, ds2, ds3, dz1, dz2, dz3;
    };
    auto solve = [&](const Vector& rc1, const Vector& rc2, const Vector& rc3) {
      // Constraint blocks g1 = u - lo (J = I), g2 = hi - u (J = -I), g3 = th + L u (J = L).
      const Vector q1 = d1.cwiseProduct(rp1) + rc1.cwiseQuotient(s1);
      const Vector q2 = d2.cwiseProduct(rp2) + rc2.cwiseQuotient(s2);
      const Vector q3 = d3.cwiseProduct(rp3) + rc3.cwiseQuotient(s3);
      const Vector rhs = rd - (q1 - q2 + l.transpose() * q3);
      Direction dir;
      dir.du = solver.solve(rhs);
      const Vector j3 = l * dir.du;
      dir.ds1 = dir.du + rp1;
      dir.ds2 = -dir.du + rp2;
      dir.ds3 = j3 + rp3;
      dir.dz1 = -(d1.cwiseProduct(dir.ds1) + rc1.cwiseQuotient(s1));
      dir.dz2 = -(d2.cwiseProduct(dir.ds2) + rc2.cwiseQuotient(s2));
      dir.dz3 = -(d3.cwiseProduct(dir.ds3) + rc3.cwiseQuotient(s3));
      return dir;
    };
    auto primal_step = [&](const Direction& d) {
      return std::min({max_step(s1, d.ds1), max_step(s2, d.ds2), max_step(s3, d.ds3)});
    };
    auto dual_step = [&](const Direction& d) {
      return std::min({max_step(z1, d.dz1), max_step(z2, d.dz2), max_step(z3, d.dz3)});
    };

    const Vector c1 = s1.cwiseProduct(z1), c2 = s2.cwiseProduct(z2), c3 = s3.cwiseProduct(z3);
    const Direction aff = solve(c1, c2, c3);
    const double ap = primal_step(aff), ad = dual_step(aff);
    const double mu = gap / m;
    const double mu_aff = ((s1 + ap * aff.ds1).dot(z1 + ad * aff.dz1) + (s2 + ap * aff.ds2).dot(z2 + ad * aff.dz2) +
                           (s3 + ap * aff.ds3).dot(z3 + ad * aff.dz3)) / m;
    const double sigma = std::pow(mu_aff / mu, 3);
    const Vector sm = Vector::Constant(n, sigma * mu);
    const Direction dir = solve(c1 + aff.ds1.cwiseProduct(aff.dz1) - sm, c2 + aff.ds2.cwiseProduct(aff.dz2) - sm,
                                c3 + aff.ds3.cwiseProduct(aff.dz3) - sm);
    const double step_p = std::min(1.0, 0.995 * primal_step(dir));
    const double step_d = std::min(1.0, 0.995 * dual_step(dir));
    u += step_p * dir.du;
    s1 += step_p * dir.ds1;
    s2 += step_p * dir.ds2;
    s3 += step_p * dir.ds3;
    z1 += step_d * dir.dz1;
    z2 += step_d * dir.dz2;
    z3 += step_d * dir.dz3;
  }
  GridField best(grid, std::vector<double>(u.data(), u.data() + n));
  throw NonConvergence("capacity: interior point iteration cap reached", report, best);
}

// P(low on E, high elsewhere) and the bounds themselves.
CapacityResult relative_extremal(const ThetaDensity& theta, const GridField& low, const GridField& high,
                                 const Mask& e, const CapacityOptions& options) {
  GridField obstacle = high;
  for (std::size_t k = 0; k < obstacle.size(); ++k) {
    if (e[k]) obstacle[k] = low[k];
  }
  ObstacleSolution env = psor_envelope(theta, obstacle, options.psor);
  const double floor_tol = contact_tol(obstacle);
  CapacityResult best{-std::numeric_limits<double>::infinity(), CapacityMode::lower_bound, high, env.report};
  auto consider = [&](const GridField& u) {
    if (!is_theta_psh(theta, u, 1e-8).psh) return;
    for (std::size_t k = 0; k < u.size(); ++k) {
      if (u[k] < low[k] - floor_tol || u[k] > high[k] + floor_tol) return;
    }
    const double value = mass_on(theta, u, e);
    if (value > best.value) {
      best.value = value;
      best.witness = u;
    }
  };
  consider(env.u);
  consider(high);
  consider(low);
  if (!std::isfinite(best.value)) throw NoSubsolution("capacity: no admissible candidate between the bounds");
  return best;
}

}  // namespace

GridField extremal_function(const ThetaDensity& theta, const PsorOptions& options) {
  const GridField& d = theta.density();
  if (d.min() >= 0.0) return GridField(theta.grid(), 0.0);
  return psor_envelope(theta, GridField(theta.grid(), 0.0), options).u;
}

double energy_E(const ThetaDensity& theta, const GridField& u, const GridField& v_theta) {
  require_same_grid(u, v_theta);
  GridField integrand = ma_density(theta, u) + ma_density(theta, v_theta);
  for (std::size_t k = 0; k < integrand.size(); ++k) integrand[k] *= u[k] - v_theta[k];
  return 0.5 * integrate(integrand);
}

double energy_Ip(const ThetaDensity& theta, const GridField& u, const GridField& v, double p) {
  if (!(p > 0.0)) throw InvalidArgument("energy_Ip: p must be positive");
  require_same_grid(u, v);
  GridField integrand = ma_density(theta, u) + ma_density(theta, v);
  for (std::size_t k = 0; k < integrand.size(); ++k) integrand[k] *= std::pow(std::abs(u[k] - v[k]), p);
  return integrate(integrand);
}

double quasi_triangle_constant(double p) { return std::pow(2.0, p + 1.0) + 3.0 * std::pow(2.0, 2.0 * p + 2.0); }

QuasiTriangle quasi_triangle_check(const ThetaDensity& theta, const GridField& u, const GridField& v,
                                   const GridField& w, double p) {
  QuasiTriangle out;
  out.lhs = energy_Ip(theta, u, v, p);
  const double sum = energy_Ip(theta, u, w, p) + energy_Ip(theta, v, w, p);
  out.rhs = quasi_triangle_constant(p) * sum;
  out.ratio = sum > 0.0 ? out.lhs / sum : 0.0;
  out.passed = out.lhs <= out.rhs;
  return out;
}

GridField random_trig_field(const TorusGrid& grid, std::mt19937_64& rng, int modes) {
  if (modes < 1) throw InvalidArgument("random_trig_field: modes must be positive");
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 1.0);
  std::uniform_int_distribution<int> freq(0, modes);
  struct Mode {
    int a, b;
    double amp, phase;
  };
  std::vector<Mode> terms;
  for (int k = 0; k < modes; ++k) {
    int a = freq(rng), b = freq(rng);
    if (a == 0 && b == 0) a = 1;
    const double amp = coef(rng);
    terms.push_back({a, b, amp, phase(rng)});
  }
  GridField g = GridField::sample(grid, [&](double x, double y) {
    double s = 0.0;
    for (const Mode& m : terms) s += m.amp * std::cos(kTwoPi * (m.a * x + m.b * y + m.phase));
    return s;
  });
  const double sup = std::max(std::abs(g.min()), std::abs(g.max()));
  if (sup > 0.0) g *= 1.0 / sup;
  return g;
}

GridField random_psh_field(const ThetaDensity& theta, std::mt19937_64& rng, int modes, double margin) {
  const GridField& d = theta.density();
  if (!(d.min() > 0.0)) throw InvalidArgument("random_psh_field: theta density must be positive");
  GridField g = random_trig_field(theta.grid(), rng, modes);
  const GridField curv = curvature(g);
  double worst = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) worst = std::max(worst, -curv[k] / d[k]);
  const double cap = worst > 0.0 ? (1.0 - margin) / worst : 1.0;
  std::uniform_real_distribution<double> scale(0.1, 1.0);
  std::uniform_real_distribution<double> shift(-1.0, 1.0);
  g *= cap * scale(rng);
  g += shift(rng);
  return g;
}

CapacityResult capacity(const ThetaDensity& theta, const Mask& e, CapacityMode mode, const CapacityOptions& options) {
  const GridField v = extremal_function(theta, options.psor);
  return generalized_capacity(theta, v - 1.0, v, e, mode, options);
}

CapacityResult generalized_capacity(const ThetaDensity& theta, const GridField& low, const GridField& high,
                                    const Mask& e, CapacityMode mode, const CapacityOptions& options) {
  require_same_grid(theta.density(), low);
  require_same_grid(low, high);
  if (e.size() != low.size()) throw InfeasibleMask("capacity: mask does not match the grid");
  for (std::size_t k = 0; k < low.size(); ++k) {
    if (low[k] > high[k]) throw OrderViolation("capacity: lower bound exceeds upper bound at site " + std::to_string(k));
  }
  if (std::none_of(e.begin(), e.end(), [](char c) { return c != 0; })) {
    return {0.0, mode, high, {}};
  }
  if (mode == CapacityMode::lower_bound) return relative_extremal(theta, low, high, e, options);
  if (theta.grid().n() > options.max_exact_n) {
    throw InvalidArgument("capacity: exact mode is limited to N <= " + std::to_string(options.max_exact_n));
  }
  return interior_point(theta, low, high, e, options);
}

std::vector<double> cap_convergence_metric(const ThetaDensity& theta, const std::vector<GridField>& u_seq,
                                           const GridField& u, double eps, const CapacityOptions& options) {
  if (!(eps > 0.0)) throw InvalidArgument("cap_convergence_metric: eps must be positive");
  std::vector<double> out;
  for (const GridField& uj : u_seq) {
    require_same_grid(uj, u);
    Mask e(u.size(), 0);
    for (std::size_t k = 0; k < u.size(); ++k) e[k] = std::abs(uj[k] - u[k]) > eps;
    out.push_back(capacity(theta, e, CapacityMode::lower_bound, options).value);
  }
  return out;
}

std::vector<GridField> darvas_sequence_envelope(const ThetaDensity& theta, const std::vector<GridField>& u_list,
                                                const PsorOptions& options) {
  std::vector<GridField> out(u_list.size(), GridField(theta.grid()));
  if (u_list.empty()) return out;
  GridField tail = u_list.back();
  for (std::size_t j = u_list.size(); j-- > 0;) {
    tail = pointwise_min(tail, u_list[j]);
    out[j] = psor_envelope(theta, tail, options).u;
  }
  return out;
}

WeightFunction WeightFunction::identity() { return WeightFunction("identity", 1.0); }

WeightFunction WeightFunction::power(double q) {
  if (!(q > 0.0 && q <= 1.0)) throw InvalidArgument("WeightFunction: q must lie in (0, 1]");
  return WeightFunction("power", q);
}

double WeightFunction::operator()(double t) const {
  if (t > 0.0) throw InvalidArgument("WeightFunction: defined for t <= 0");
  return -std::pow(-t, q_);
}

}  // namespace maenv
