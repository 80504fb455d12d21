#include "maenv/newton.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "maenv/errors.hpp"
#include "maenv/torus.hpp"

namespace maenv {
namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct Evaluation {
  std::vector<double> residual;  // over free sites
  std::vector<double> diag;      // d rhs / d phi over free sites
  double merit = 0.0;            // Euclidean norm of residual
  double scaled_sup = 0.0;       // max |F| / (1 + |rhs|)
  bool finite = true;
};

class NewtonSystem {
 public:
  NewtonSystem(const ThetaDensity& theta, std::span<const ExpTerm> terms, const Mask& free_sites)
      : theta_(theta), terms_(terms), grid_(theta.grid()) {
    for (const auto& t : terms_) {
      require_same_grid(t.weight, theta.density());
      require_same_grid(t.offset, theta.density());
      if (!(t.beta > 0.0)) throw InvalidArgument("exponential term needs beta > 0");
    }
    row_of_.assign(grid_.size(), -1);
    for (std::size_t k = 0; k < grid_.size(); ++k) {
      if (free_sites.empty() || free_sites[k]) {
        row_of_[k] = static_cast<int>(sites_.size());
        sites_.push_back(k);
      }
    }
    if (sites_.empty()) throw InvalidArgument("Newton solve with no free sites");
    build_pattern();
  }

  const std::vector<std::size_t>& sites() const { return sites_; }

  Evaluation evaluate(const GridField& phi) const {
    Evaluation ev;
    ev.residual.resize(sites_.size());
    ev.diag.resize(sites_.size());
    const GridField curv = curvature(phi);
    double sq = 0.0;
    for (std::size_t r = 0; r < sites_.size(); ++r) {
      const std::size_t k = sites_[r];
      double rhs = 0.0;
      double d = 0.0;
      for (const auto& t : terms_) {
        if (t.weight[k] == 0.0) continue;
        const double e = t.weight[k] * std::exp(t.beta * (phi[k] - t.offset[k]));
        rhs += e;
        d += t.beta * e;
      }
      const double f = theta_.density()[k] + curv[k] - rhs;
      if (!std::isfinite(f) || !std::isfinite(d)) ev.finite = false;
      ev.residual[r] = f;
      ev.diag[r] = d;
      sq += f * f;
      ev.scaled_sup = std::max(ev.scaled_sup, std::abs(f) / (1.0 + std::abs(rhs)));
    }
    ev.merit = std::sqrt(sq);
    if (!ev.finite) {
      ev.merit = std::numeric_limits<double>::infinity();
      ev.scaled_sup = std::numeric_limits<double>::infinity();
    }
    return ev;
  }

  /// Solves (-c Lap + diag) delta = residual on the free sites.
  Eigen::VectorXd step(const Evaluation& ev) {
    for (std::size_t r = 0; r < sites_.size(); ++r) *diag_ptr_[r] = 4.0 * c_ + ev.diag[r];
    if (!analysed_) {
      solver_.analyzePattern(matrix_);
      analysed_ = true;
    }
    solver_.factorize(matrix_);
    if (solver_.info() != Eigen::Success) {
      throw Error("Newton system is singular; the right-hand side vanishes on every free site");
    }
    Eigen::Map<const Eigen::VectorXd> rhs(ev.residual.data(), static_cast<Eigen::Index>(ev.residual.size()));
    Eigen::VectorXd delta = solver_.solve(rhs);
    if (solver_.info() != Eigen::Success || !delta.allFinite()) throw Error("Newton linear solve failed");
    return delta;
  }

 private:
  void build_pattern() {
    const int n = grid_.n();
    const double h = grid_.h();
    c_ = 1.0 / (kTwoPi * h * h);
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(sites_.size() * 5);
    for (std::size_t r = 0; r < sites_.size(); ++r) {
      const std::size_t k = sites_[r];
      const int i = static_cast<int>(k) / n;
      const int j = static_cast<int>(k) % n;
      triplets.emplace_back(static_cast<int>(r), static_cast<int>(r), 4.0 * c_);
      const std::size_t nbrs[4] = {grid_.index(i + 1, j), grid_.index(i - 1, j), grid_.index(i, j + 1),
                                   grid_.index(i, j - 1)};
      for (std::size_t nb : nbrs) {
        if (row_of_[nb] >= 0) triplets.emplace_back(static_cast<int>(r), row_of_[nb], -c_);
      }
    }
    const auto m = static_cast<Eigen::Index>(sites_.size());
    matrix_.resize(m, m);
    matrix_.setFromTriplets(triplets.begin(), triplets.end());
    matrix_.makeCompressed();
    diag_ptr_.resize(sites_.size());
    for (std::size_t r = 0; r < sites_.size(); ++r) {
      diag_ptr_[r] = &matrix_.coeffRef(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
    }
  }

  const ThetaDensity& theta_;
  std::span<const ExpTerm> terms_;
  TorusGrid grid_;
  std::vector<int> row_of_;
  std::vector<std::size_t> sites_;
  double c_ = 0.0;
  SparseMatrix matrix_;
  std::vector<double*> diag_ptr_;
  Eigen::SimplicialLDLT<SparseMatrix> solver_;
  bool analysed_ = false;
};

}  // namespace

GridField exponential_ma_residual(const ThetaDensity& theta, std::span<const ExpTerm> terms,
                                  const GridField& phi) {
  GridField out = ma_density(theta, phi);
  for (const auto& t : terms) {
    for (std::size_t k = 0; k < out.size(); ++k) {
      if (t.weight[k] != 0.0) out[k] -= t.weight[k] * std::exp(t.beta * (phi[k] - t.offset[k]));
    }
  }
  return out;
}

NewtonResult solve_exponential_ma(const ThetaDensity& theta, std::span<const ExpTerm> terms,
                                  GridField init, const NewtonOptions& options,
                                  const Mask& free_sites) {
  require_same_grid(init, theta.density());
  NewtonSystem system(theta, terms, free_sites);
  const auto& sites = system.sites();

  NewtonResult result{std::move(init), {}};
  SolverReport& report = result.report;
  report.method = "damped-newton";

  Evaluation ev = system.evaluate(result.phi);
  if (!ev.finite) throw InvalidArgument("Newton initial guess overflows the exponential terms");

  for (int it = 0;; ++it) {
    report.iterations = it;
    report.residual = ev.scaled_sup;
    report.residual_history.push_back(ev.scaled_sup);
    if (ev.scaled_sup <= options.tol) {
      report.converged = true;
      return result;
    }
    if (it == options.max_iter) {
      throw NonConvergence("Newton: iteration cap reached, residual " + std::to_string(ev.scaled_sup), report);
    }

    const Eigen::VectorXd delta = system.step(ev);
    // far below the solution the exponentials are flat and the raw step is astronomically long
    const double longest = delta.lpNorm<Eigen::Infinity>();
    const double first = longest > options.max_update ? options.max_update / longest : 1.0;
    double alpha = first;
    GridField trial = result.phi;
    for (;;) {
      for (std::size_t r = 0; r < sites.size(); ++r) {
        trial[sites[r]] = result.phi[sites[r]] + alpha * delta[static_cast<Eigen::Index>(r)];
      }
      Evaluation next = system.evaluate(trial);
      if (next.finite && next.merit <= (1.0 - options.armijo * alpha) * ev.merit) {
        result.phi = trial;
        ev = std::move(next);
        report.damping_history.push_back(alpha);
        break;
      }
      alpha *= options.backtrack;
      if (alpha < options.min_step * first) {
        throw NewtonStall("Newton: line search stalled at residual " + std::to_string(ev.scaled_sup), report);
      }
    }
  }
}

GridField solve_poisson(const ThetaDensity& theta, const GridField& target) {
  require_same_grid(theta.density(), target);
  const double gap = integrate(target) - theta.volume();
  if (std::abs(gap) > 1e-10 * std::max(1.0, theta.volume())) {
    throw InvalidArgument("solve_poisson: target mass differs from the volume");
  }
  const TorusGrid& grid = target.grid();
  const int n = grid.n();
  const double h = grid.h();
  const double c = 1.0 / (kTwoPi * h * h);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(grid.size() * 5);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const auto r = static_cast<int>(grid.index(i, j));
      triplets.emplace_back(r, r, 4.0);
      for (auto nb : {grid.index(i + 1, j), grid.index(i - 1, j), grid.index(i, j + 1), grid.index(i, j - 1)}) {
        triplets.emplace_back(r, static_cast<int>(nb), -1.0);
      }
    }
  }
  const auto m = static_cast<Eigen::Index>(grid.size());
  SparseMatrix a(m, m);
  a.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::VectorXd b(m);
  double mean = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    b[k] = (theta.density()[k] - target[k]) / c;
    mean += b[k];
  }
  mean /= static_cast<double>(m);
  b.array() -= mean;

  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(1e-14);
  cg.setMaxIterations(20 * n * n);
  cg.compute(a);
  Eigen::VectorXd w = cg.solve(b);
  if (cg.info() != Eigen::Success) throw Error("solve_poisson: CG did not converge");
  w.array() -= w.mean();
  return GridField(grid, std::vector<double>(w.data(), w.data() + m));
}

}  // namespace maenv
