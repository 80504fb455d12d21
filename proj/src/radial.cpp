#include "maenv/radial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "maenv/errors.hpp"

namespace maenv::radial {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Hull {
  std::vector<double> t;
  std::vector<double> g;
};

Hull lower_hull(std::span<const double> ts, std::span<const double> gs) {
  Hull hull;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    while (hull.t.size() >= 2) {
      const std::size_t k = hull.t.size();
      const double ax = hull.t[k - 1] - hull.t[k - 2];
      const double ay = hull.g[k - 1] - hull.g[k - 2];
      const double bx = ts[i] - hull.t[k - 2];
      const double by = gs[i] - hull.g[k - 2];
      if (ax * by - ay * bx > 0.0) break;
      hull.t.pop_back();
      hull.g.pop_back();
    }
    hull.t.push_back(ts[i]);
    hull.g.push_back(gs[i]);
  }
  return hull;
}

// Largest convex minorant of the points (ts, gs) with slopes in [s_min, s_max],
// evaluated at the increasing points `at`. Beyond the last vertex with an infinite
// bound the envelope continues with its last slope.
std::vector<double> hull_envelope(std::span<const double> ts, std::span<const double> gs, double s_min,
                                  double s_max, std::span<const double> at) {
  const Hull hull = lower_hull(ts, gs);
  const std::size_t m = hull.t.size();
  std::vector<double> edge(m > 0 ? m - 1 : 0);
  for (std::size_t k = 0; k + 1 < m; ++k) edge[k] = (hull.g[k + 1] - hull.g[k]) / (hull.t[k + 1] - hull.t[k]);

  std::size_t p = 0;
  while (p + 1 < m && edge[p] < s_min) ++p;
  std::size_t q = m - 1;
  while (q > 0 && edge[q - 1] > s_max) --q;
  if (q < p) q = p;

  double left = s_min;
  if (!std::isfinite(left)) left = p < q ? edge[p] : 0.0;
  double right = s_max;
  if (!std::isfinite(right)) right = q > p ? edge[q - 1] : std::max(left, 0.0);

  std::vector<double> out(at.size());
  std::size_t k = p;
  for (std::size_t i = 0; i < at.size(); ++i) {
    const double t = at[i];
    if (t <= hull.t[p]) {
      out[i] = hull.g[p] + left * (t - hull.t[p]);
    } else if (t >= hull.t[q]) {
      out[i] = hull.g[q] + right * (t - hull.t[q]);
    } else {
      while (k + 1 < q && hull.t[k + 1] < t) ++k;
      const double w = (t - hull.t[k]) / (hull.t[k + 1] - hull.t[k]);
      out[i] = (1.0 - w) * hull.g[k] + w * hull.g[k + 1];
    }
  }
  return out;
}

std::vector<double> axis_points(const TAxis& axis) {
  std::vector<double> ts(axis.size());
  for (int i = 0; i < axis.size(); ++i) ts[i] = axis.t(i);
  return ts;
}

// One-sided derivative of order `order` (1..4) at node i from f[i], f[i + dir], ...
double one_sided(std::span<const double> f, int i, int dir, int order, double dt) {
  static constexpr std::array<std::array<double, 5>, 4> kCoef = {{
      {1.0, -1.0, 0.0, 0.0, 0.0},
      {1.5, -2.0, 0.5, 0.0, 0.0},
      {11.0 / 6.0, -3.0, 1.5, -1.0 / 3.0, 0.0},
      {25.0 / 12.0, -4.0, 3.0, -4.0 / 3.0, 0.25},
  }};
  double s = 0.0;
  for (int k = 0; k <= order; ++k) s += kCoef[order - 1][k] * f[i + dir * k];
  return dir < 0 ? s / dt : -s / dt;
}

}  // namespace

TAxis::TAxis(double t_min, double t_max, int m) : t_min_(t_min), t_max_(t_max), m_(m) {
  if (!(t_min < 0.0 && 0.0 < t_max)) throw InvalidArgument("TAxis: need t_min < 0 < t_max");
  if (m < 64) throw InvalidArgument("TAxis: need at least 64 samples");
}

TAxis TAxis::centered(int m, double half_width) {
  if (!(half_width > 0.0)) throw InvalidArgument("TAxis: half width must be positive");
  return TAxis(-half_width, -half_width + (m - 1) * (2.0 * half_width / m), m);
}

int TAxis::nearest(double t) const noexcept {
  const long i = std::lround((t - t_min_) / spacing());
  return int(std::clamp(i, 0L, long(m_ - 1)));
}

void RadialProfile::validate(double tol) const {
  if (int(values.size()) != axis.size()) throw InvalidArgument("RadialProfile: size does not match axis");
  const double dt = axis.spacing();
  double prev = 0.0;
  for (int k = 0; k + 1 < axis.size(); ++k) {
    const double c = (values[k + 1] - values[k]) / dt;
    if (!std::isfinite(c)) throw InvalidArgument("RadialProfile: non-finite values");
    if (c < -tol || c > 0.5 + tol) {
      throw InvalidArgument("RadialProfile: slope " + std::to_string(c) + " outside [0, 1/2] at t = " +
                            std::to_string(axis.t(k)));
    }
    if (k > 0 && c - prev < -tol) {
      throw InvalidArgument("RadialProfile: not convex at t = " + std::to_string(axis.t(k)));
    }
    prev = c;
  }
}

io::Table RadialProfile::table() const {
  io::Table t{{"t", "value"}, {}};
  for (int i = 0; i < axis.size(); ++i) t.rows.push_back({axis.t(i), values[i]});
  return t;
}

double SlopeMeasure::atom_mass() const {
  double s = 0.0;
  for (const Atom& a : atoms) s += a.mass;
  return s;
}

double SlopeMeasure::continuous_mass() const { return cumulative.back() - cumulative.front() - atom_mass(); }

io::Table SlopeMeasure::table() const {
  io::Table t{{"t", "F", "atom_mass"}, {}};
  std::size_t a = 0;
  for (int i = 0; i < axis.size(); ++i) {
    double m = 0.0;
    if (a < atoms.size() && axis.nearest(atoms[a].t) == i) m = atoms[a++].mass;
    t.rows.push_back({axis.t(i), cumulative[i], m});
  }
  return t;
}

RadialObstacle RadialObstacle::sample(const TAxis& axis, const std::function<double(double)>& h,
                                      std::span<const double> jumps) {
  RadialObstacle out{axis, std::vector<double>(axis.size()), {}};
  for (int i = 0; i < axis.size(); ++i) out.value[i] = h(axis.t(i));
  out.lower = out.value;
  for (double jump : jumps) {
    const int i = axis.nearest(jump);
    const double t = axis.t(i);
    if (std::abs(t - jump) > 1e-12 * (1.0 + std::abs(jump))) continue;
    const double eta = 1e-9 * axis.spacing();
    out.lower[i] = std::min({out.value[i], h(t - eta), h(t + eta)});
  }
  return out;
}

RadialObstacle RadialObstacle::constant(const TAxis& axis, double c) {
  return sample(axis, [c](double) { return c; });
}

RadialObstacle RadialObstacle::ball_step(const TAxis& axis) {
  const double jump = 0.0;
  return sample(axis, [](double t) { return t < 0.0 ? -1.0 : 0.0; }, std::span<const double>(&jump, 1));
}

double fs_potential(double t) {
  if (t > 0.0) return 0.5 * (t + std::log1p(std::exp(-t)));
  return 0.5 * std::log1p(std::exp(t));
}

double fs_slope(double t) {
  if (t >= 0.0) return 0.5 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return 0.5 * e / (1.0 + e);
}

RadialProfile constrained_convex_envelope(const TAxis& axis, std::span<const double> g, double s_min,
                                          double s_max) {
  if (s_min > s_max) throw InvalidArgument("constrained_convex_envelope: s_min > s_max");
  if (int(g.size()) != axis.size()) throw InvalidArgument("constrained_convex_envelope: size does not match axis");
  for (double x : g) {
    if (!std::isfinite(x)) throw InvalidArgument("constrained_convex_envelope: samples must be finite");
  }
  const std::vector<double> ts = axis_points(axis);
  return {axis, hull_envelope(ts, g, s_min, s_max, ts)};
}

RadialProfile fs_profile(const TAxis& axis) {
  RadialProfile p{axis, std::vector<double>(axis.size())};
  for (int i = 0; i < axis.size(); ++i) p.values[i] = fs_potential(axis.t(i));
  return p;
}

RadialProfile radial_envelope(const RadialObstacle& h, int n) {
  if (n < 1) throw InvalidArgument("radial_envelope: dimension must be positive");
  std::vector<double> g(h.axis.size());
  for (int i = 0; i < h.axis.size(); ++i) {
    if (!std::isfinite(h.lower[i])) throw InvalidArgument("radial_envelope: obstacle must be bounded");
    g[i] = h.lower[i] + fs_potential(h.axis.t(i));
  }
  return constrained_convex_envelope(h.axis, g, 0.0, 0.5);
}

std::vector<double> envelope_potential(const RadialProfile& profile) {
  std::vector<double> out(profile.values.size());
  for (int i = 0; i < profile.axis.size(); ++i) out[i] = profile.values[i] - fs_potential(profile.axis.t(i));
  return out;
}

SlopeMeasure radial_ma_mass(const RadialProfile& v, int n) {
  if (n < 1) throw InvalidArgument("radial_ma_mass: dimension must be positive");
  v.validate();
  const int m = v.axis.size();
  const double dt = v.axis.spacing();
  const std::span<const double> f(v.values);

  std::vector<double> chord(m - 1);
  for (int k = 0; k + 1 < m; ++k) chord[k] = (f[k + 1] - f[k]) / dt;
  std::vector<double> jump(m, 0.0);
  for (int i = 1; i + 1 < m; ++i) jump[i] = chord[i] - chord[i - 1];
  std::vector<char> atom(m, 0);
  for (int i = 1; i + 1 < m; ++i) {
    const double ambient = std::max(std::abs(jump[i - 1]), std::abs(jump[i + 1]));
    atom[i] = jump[i] > 1e-8 && jump[i] > 10.0 * ambient;
  }

  // Highest order whose stencil has no atom strictly inside.
  auto order = [&](int i, int dir) {
    int k = 0;
    while (k < 4) {
      const int next = i + dir * (k + 1);
      if (next < 0 || next >= m) break;
      if (k > 0 && atom[i + dir * k]) break;
      ++k;
    }
    return k;
  };
  auto left_slope = [&](int i) {
    const int k = order(i, -1);
    double s = k > 0 ? one_sided(f, i, -1, k, dt) : one_sided(f, i, +1, std::max(order(i, +1), 1), dt);
    if (i > 0) s = std::max(s, chord[i - 1]);
    if (i + 1 < m) s = std::min(s, chord[i]);
    return std::max(s, 0.0);
  };
  auto right_slope = [&](int i) {
    double s = one_sided(f, i, +1, std::max(order(i, +1), 1), dt);
    if (i > 0) s = std::max(s, chord[i - 1]);
    return std::min(s, chord[i]);
  };

  SlopeMeasure out{v.axis, std::vector<double>(m), {}, 0.0, 0.0};
  for (int i = 0; i < m; ++i) out.cumulative[i] = std::pow(2.0 * left_slope(i), n);
  // rounding in the chords can undo monotonicity by an ulp or so
  for (int i = 1; i < m; ++i) out.cumulative[i] = std::max(out.cumulative[i], out.cumulative[i - 1]);
  for (int i = 1; i + 1 < m; ++i) {
    if (!atom[i]) continue;
    const double mass = std::pow(2.0 * std::max(right_slope(i), left_slope(i)), n) - out.cumulative[i];
    if (mass > 0.0) out.atoms.push_back({v.axis.t(i), mass});
  }
  out.lower_tail_mass = out.cumulative.front();
  out.total_mass = out.cumulative.back();
  return out;
}

double orthogonality_defect_radial(const RadialObstacle& h, int n) {
  const RadialProfile profile = radial_envelope(h, n);
  const std::vector<double> p = envelope_potential(profile);
  const SlopeMeasure mu = radial_ma_mass(profile, n);
  const int m = h.axis.size();
  auto gap = [&](int i) { return std::max(h.value[i] - p[i], 0.0); };

  std::vector<double> atom_at(m, 0.0);
  for (const Atom& a : mu.atoms) atom_at[h.axis.nearest(a.t)] += a.mass;
  double defect = gap(0) * mu.lower_tail_mass;
  for (int i = 0; i < m; ++i) {
    defect += gap(i) * atom_at[i];
    if (i + 1 < m) defect += gap(i) * std::max(mu.cumulative[i + 1] - mu.cumulative[i] - atom_at[i], 0.0);
  }
  return defect;
}

std::vector<double> local_envelope_ball(std::span<const double> t, std::span<const double> h, BallMode mode) {
  if (t.empty()) throw InvalidArgument("local_envelope_ball: empty axis");
  if (t.size() != h.size()) throw InvalidArgument("local_envelope_ball: sizes differ");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(h[i])) throw InvalidArgument("local_envelope_ball: obstacle must be bounded");
    if (i > 0 && !(t[i] > t[i - 1])) throw InvalidArgument("local_envelope_ball: axis must be increasing");
  }
  if (std::abs(t.back()) > 1e-12) throw InvalidArgument("local_envelope_ball: axis must end at t = 0");
  const std::size_t used = mode == BallMode::closure ? t.size() : t.size() - 1;
  if (used == 0) throw InvalidArgument("local_envelope_ball: no interior samples");
  return hull_envelope(t.first(used), h.first(used), 0.0, kInf, t);
}

}  // namespace maenv::radial
