#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "maenv/envelope.hpp"
#include "maenv/grid.hpp"
#include "maenv/io.hpp"
#include "maenv/newton.hpp"

namespace maenv {

/// theta + curvature(phi) = exp(beta phi) mu.
NewtonResult newton_ma_exponential(const ThetaDensity& theta, const MeasureDensity& mu, double beta,
                                   const NewtonOptions& options = {});

/// Pointwise check of one side of  ma(psi) = exp(psi) mu.
struct ResidualReport {
  bool passed = false;
  double worst = 0.0;  ///< max over the grid of the signed residual
  std::size_t site = 0;
};

/// max(ma(psi) - e^psi mu) <= tol.
ResidualReport supersolution_check(const ThetaDensity& theta, const GridField& psi, const MeasureDensity& mu,
                                   double tol);
/// max(e^u mu - ma(u)) <= tol.
ResidualReport subsolution_check(const ThetaDensity& theta, const GridField& u, const MeasureDensity& mu,
                                 double tol);

/// max(ma(u), 0).
GridField ma_positive(const ThetaDensity& theta, const GridField& u);

/// theta + curvature(phi) = e^{beta (phi - u)} ma+(u) + e^{beta (phi - v)} ma+(v).
/// Large beta is reached by doubling continuation from beta = 1.
NewtonResult solve_two_measure(const ThetaDensity& theta, const GridField& u, const GridField& v, double beta,
                               const NewtonOptions& options = {}, double psh_tol = 1e-8);

struct PminResult {
  GridField phi;               ///< P(min(u, v))
  GridField partition_defect;  ///< ma(phi) - 1{phi=u} ma(u) - 1{phi=v} ma(v)
  double max_defect = 0.0;
};

PminResult pmin_compose(const ThetaDensity& theta, const GridField& u, const GridField& v,
                        const PsorOptions& psor = {});

/// Lazily generated supersolutions; the generator returns nullopt when exhausted.
class SupersolutionFamily {
 public:
  using Generator = std::function<std::optional<GridField>(int index)>;

  explicit SupersolutionFamily(Generator generator) : generator_(std::move(generator)) {}
  static SupersolutionFamily from_members(std::vector<GridField> members);

  /// Member `index`, generating and caching as needed.
  std::optional<GridField> member(int index);
  const std::vector<GridField>& members() const noexcept { return members_; }

 private:
  Generator generator_;
  std::vector<GridField> members_;
  bool exhausted_ = false;
};

/// psi_k solving  ma(psi) = e^psi mu 1_{K_k}  for stripes K_k = {dist(x, centre) <= r_k}
/// growing until they cover the grid; each is a supersolution because mu 1_K <= mu.
SupersolutionFamily growing_mask_family(const ThetaDensity& theta, const MeasureDensity& mu, int count,
                                        const NewtonOptions& options = {});

/// w - C with theta + curvature(w) = V; C chosen so that V >= e^{w - C} mu.
GridField default_subsolution(const ThetaDensity& theta, const MeasureDensity& mu);

struct PerronOptions {
  int max_members = 64;
  double tol = 1e-3;           ///< fold-to-fold sup change regarded as converged
  double solution_tol = 1e-6;  ///< a fold that is also a subsolution to this tolerance is the solution
  double check_tol = 1e-7;    ///< supersolution residual tolerance for members and folds
  std::vector<int> order;     ///< optional fold order over member ids
  PsorOptions psor;
};

struct PerronRow {
  int round = 0;
  int member_id = 0;
  double sup_gap = 0.0;                 ///< sup change of the running envelope
  double supersolution_residual = 0.0;  ///< of the running envelope
};

struct PerronResult {
  GridField u;
  std::vector<PerronRow> history;

  /// Columns round, member_id, sup_gap, supersolution_residual.
  io::Table table() const;
};

/// Folds members with P(min(., .)). Throws NoSubsolution when `subsolution`
/// fails the check and FamilyExhausted when the last fold still moved by more than tol.
PerronResult perron_solve(const ThetaDensity& theta, const MeasureDensity& mu, SupersolutionFamily& family,
                          const GridField& subsolution, const PerronOptions& options = {});

/// Solves ma(v) = e^v mu on the mask `ball` with v = boundary_data elsewhere.
NewtonResult local_dirichlet_solve(const ThetaDensity& theta, const MeasureDensity& mu, const Mask& ball,
                                   const GridField& boundary_data, const NewtonOptions& options = {});

struct GlueResult {
  GridField envelope;  ///< P(psi), psi = v_local on ball, u_global elsewhere
  ResidualReport check;
};

/// Throws BoundaryTraceViolation when v_local < u_global - tol on the outer ring of `ball`.
GlueResult glue_supersolution(const ThetaDensity& theta, const GridField& u_global, const GridField& v_local,
                              const Mask& ball, const MeasureDensity& mu, double tol = 1e-7,
                              const PsorOptions& psor = {});

}  // namespace maenv
