#pragma once

// Radial potentials on C^n in CP^n, written as convex functions of t = log|z|^2.
// A radial omega-psh u corresponds to v = u + rho, convex with slopes in [0, 1/2].

#include <functional>
#include <span>
#include <vector>

#include "maenv/io.hpp"

namespace maenv::radial {

/// Uniform samples t_i = t_min + i * (t_max - t_min) / (M - 1).
class TAxis {
 public:
  TAxis(double t_min, double t_max, int m);
  /// Spacing 2 * half_width / m starting at -half_width, so t = 0 is a sample for even m.
  static TAxis centered(int m = 4096, double half_width = 40.0);

  double t_min() const noexcept { return t_min_; }
  double t_max() const noexcept { return t_max_; }
  int size() const noexcept { return m_; }
  double spacing() const noexcept { return (t_max_ - t_min_) / (m_ - 1); }
  double t(int i) const noexcept { return t_min_ + i * spacing(); }
  /// Index of the sample nearest to t.
  int nearest(double t) const noexcept;

 private:
  double t_min_;
  double t_max_;
  int m_;
};

struct RadialProfile {
  TAxis axis;
  std::vector<double> values;

  /// Throws InvalidArgument when the second differences drop below -tol or a chord slope
  /// leaves [0 - tol, 1/2 + tol].
  void validate(double tol = 1e-9) const;
  io::Table table() const;
};

struct Atom {
  double t = 0.0;
  double mass = 0.0;
};

struct SlopeMeasure {
  TAxis axis;
  std::vector<double> cumulative;  ///< F(t_i), mass of [-inf, t_i)
  std::vector<Atom> atoms;
  double lower_tail_mass = 0.0;    ///< mass carried by t = -infinity
  double total_mass = 0.0;

  double atom_mass() const;
  double continuous_mass() const;
  /// Columns t, F, atom_mass.
  io::Table table() const;
};

/// A sampled obstacle: `value` holds h(t_i); `lower` holds the lower semicontinuous
/// regularisation, which differs from `value` only at jump samples.
struct RadialObstacle {
  TAxis axis;
  std::vector<double> value;
  std::vector<double> lower;

  static RadialObstacle sample(const TAxis& axis, const std::function<double(double)>& h,
                               std::span<const double> jumps = {});
  static RadialObstacle constant(const TAxis& axis, double c);
  /// -1 for t < 0 and 0 for t >= 0.
  static RadialObstacle ball_step(const TAxis& axis);
};

/// (1/2) log(1 + e^t).
double fs_potential(double t);
/// rho'(t) = sigma(t) / 2.
double fs_slope(double t);

/// Largest convex minorant of the samples with slopes in [s_min, s_max]. Either bound may be infinite.
RadialProfile constrained_convex_envelope(const TAxis& axis, std::span<const double> g, double s_min,
                                          double s_max);

/// P(h) + rho. The n argument is kept for symmetry with radial_ma_mass; the envelope does not depend on it.
RadialProfile radial_envelope(const RadialObstacle& h, int n);

/// P(h) at the samples, i.e. radial_envelope(h) - rho.
std::vector<double> envelope_potential(const RadialProfile& profile);

RadialProfile fs_profile(const TAxis& axis);

/// MA measure of a convex profile: F = (2 s_left)^n, atoms at slope jumps.
SlopeMeasure radial_ma_mass(const RadialProfile& v, int n);

/// Integral of (h - P(h)) dMA(P(h)), pairing atoms with the true value of h.
double orthogonality_defect_radial(const RadialObstacle& h, int n);

enum class BallMode { interior, closure };

/// Largest convex nondecreasing minorant on t <= 0. `t` must be increasing and end at 0.
/// Interior mode drops the boundary sample from the constraint set.
std::vector<double> local_envelope_ball(std::span<const double> t, std::span<const double> h, BallMode mode);

}  // namespace maenv::radial
