#pragma once

// Energies and capacities on the torus (complex dimension one, so ma is linear in u).

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "maenv/envelope.hpp"
#include "maenv/grid.hpp"
#include "maenv/report.hpp"

namespace maenv {

/// V_theta = P(0).
GridField extremal_function(const ThetaDensity& theta, const PsorOptions& options = {});

/// (1/2) * integral of (u - V)(ma(u) + ma(V)).
double energy_E(const ThetaDensity& theta, const GridField& u, const GridField& v_theta);

/// integral of |u - v|^p (ma(u) + ma(v)).
double energy_Ip(const ThetaDensity& theta, const GridField& u, const GridField& v, double p);

struct QuasiTriangle {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  ///< I_p(u,v) / (I_p(u,w) + I_p(v,w)), 0 when both are zero
  bool passed = false;
};

/// 2^{p+1} + 3 * 2^{2p+2}.
double quasi_triangle_constant(double p);

QuasiTriangle quasi_triangle_check(const ThetaDensity& theta, const GridField& u, const GridField& v,
                                   const GridField& w, double p);

/// Random trigonometric polynomial with `modes` terms of frequency <= modes, scaled to sup norm 1.
GridField random_trig_field(const TorusGrid& grid, std::mt19937_64& rng, int modes = 4);

/// c + s * random_trig_field, scaled so that theta + curvature >= margin * theta.
/// Requires a positive theta density.
GridField random_psh_field(const ThetaDensity& theta, std::mt19937_64& rng, int modes = 4, double margin = 0.1);

enum class CapacityMode { exact, lower_bound };

struct CapacityOptions {
  double tol = 1e-12;        ///< relative duality gap for the exact mode
  int max_iter = 200;
  std::uint64_t seed = 0;    ///< starting point of the interior point iteration
  int max_exact_n = 64;
  PsorOptions psor;
};

struct CapacityResult {
  double value = 0.0;
  CapacityMode mode = CapacityMode::exact;
  GridField witness;
  SolverReport report;
};

/// sup of the ma-mass of E over theta-psh u with V - 1 <= u <= V.
CapacityResult capacity(const ThetaDensity& theta, const Mask& e, CapacityMode mode,
                        const CapacityOptions& options = {});

/// sup of the ma-mass of E over theta-psh u with low <= u <= high. Throws OrderViolation
/// when low > high somewhere and InfeasibleMask when E does not match the grid.
CapacityResult generalized_capacity(const ThetaDensity& theta, const GridField& low, const GridField& high,
                                    const Mask& e, CapacityMode mode, const CapacityOptions& options = {});

/// Lower-bound capacity of {|u_j - u| > eps} for each j.
std::vector<double> cap_convergence_metric(const ThetaDensity& theta, const std::vector<GridField>& u_seq,
                                           const GridField& u, double eps, const CapacityOptions& options = {});

/// P(inf_{k >= j} u_k) for each j.
std::vector<GridField> darvas_sequence_envelope(const ThetaDensity& theta, const std::vector<GridField>& u_list,
                                                const PsorOptions& options = {});

/// Convex increasing weight chi on t <= 0: identity or t -> -(-t)^q, q in (0, 1].
class WeightFunction {
 public:
  static WeightFunction identity();
  static WeightFunction power(double q);

  double operator()(double t) const;
  const std::string& name() const noexcept { return name_; }

 private:
  WeightFunction(std::string name, double q) : name_(std::move(name)), q_(q) {}
  std::string name_;
  double q_;
};

}  // namespace maenv
