#include "scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <numbers>
#include <random>

#include "families.hpp"
#include "maenv/energy_capacity.hpp"
#include "maenv/envelope.hpp"
#include "maenv/errors.hpp"
#include "maenv/ma_equations.hpp"
#include "maenv/radial.hpp"
#include "maenv/torus.hpp"
#include "maenv/viscosity.hpp"

namespace maenv::runner {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double sup_abs(const GridField& f) { return std::max(std::abs(f.min()), std::abs(f.max())); }

ThetaDensity theta_of(const ScenarioConfig& c, const TorusGrid& grid, const std::string& key = "theta") {
  return make_theta(grid, parse_family(key, c.get_string(key), FamilyKind::theta));
}

GridField measure_of(const ScenarioConfig& c, const TorusGrid& grid, const std::string& key) {
  return make_measure(grid, parse_family(key, c.get_string(key), FamilyKind::measure));
}

Obstacle obstacle_of(const ScenarioConfig& c, const TorusGrid& grid, const std::string& key) {
  return make_obstacle(grid, parse_family(key, c.get_string(key), FamilyKind::obstacle));
}

TorusGrid grid_of(const ScenarioConfig& c) {
  const int n = c.get_int("N");
  if (n < 8 || n % 2 != 0) throw ConfigError("N: must be even and at least 8");
  return TorusGrid(n);
}

PsorOptions psor_of(const ScenarioConfig& c) {
  PsorOptions o;
  o.tol = c.get_double("psor_tol");
  return o;
}

void radial_ball(const ScenarioConfig& c, Context& ctx) {
  const auto t0 = Clock::now();
  const radial::TAxis axis = radial::TAxis::centered(c.get_int("M"), c.get_double("half_width"));
  const radial::RadialObstacle h = radial::RadialObstacle::ball_step(axis);
  const radial::RadialProfile profile = radial::radial_envelope(h, 1);
  const std::vector<double> p = radial::envelope_potential(profile);
  const double limit = std::log(2.0) / 2.0 - 1.0;

  io::Table table{{"t", "value", "exact", "P"}, {}};
  double sup_err = 0.0;
  for (int i = 0; i < axis.size(); ++i) {
    const double t = axis.t(i);
    const double exact = std::max(radial::fs_potential(t) - 1.0, t / 2.0 + limit);
    sup_err = std::max(sup_err, std::abs(profile.values[i] - exact));
    table.rows.push_back({t, profile.values[i], exact, p[i]});
  }
  ctx.check("envelope_sup_error", sup_err <= 1e-6, sup_err, 1e-6);
  const double limit_err = std::abs(p.back() - limit);
  ctx.check("limit_error", limit_err <= 1e-8, limit_err, 1e-8);

  std::vector<io::Table> measures;
  for (double nd : c.get_list("dims")) {
    const int n = int(nd);
    if (n < 1 || n != nd) throw ConfigError("dims: dimensions must be positive integers");
    const radial::SlopeMeasure mu = radial::radial_ma_mass(profile, n);
    const double expected = 1.0 - std::pow(2.0, -n);
    double atom = 0.0;
    for (const radial::Atom& a : mu.atoms) {
      if (std::abs(a.t) < 0.5 * axis.spacing()) atom += a.mass;
    }
    const double atom_err = std::abs(atom - expected);
    ctx.check("atom_mass_error_n" + std::to_string(n), atom_err <= 1e-6, atom_err, 1e-6);
    const double defect_err = std::abs(radial::orthogonality_defect_radial(h, n) - expected);
    ctx.check("orthogonality_defect_error_n" + std::to_string(n), defect_err <= 1e-6, defect_err, 1e-6);
    const double mass_err = std::abs(mu.total_mass - 1.0);
    ctx.check("total_mass_error_n" + std::to_string(n), mass_err <= 1e-10, mass_err, 1e-10);
    measures.push_back(mu.table());
  }
  const double elapsed = seconds_since(t0);
  ctx.check("runtime_seconds", elapsed < 1.0, elapsed, 1.0);
  ctx.table("profile.csv", table);
  const auto dims = c.get_list("dims");
  for (std::size_t k = 0; k < dims.size(); ++k) {
    ctx.table("measure_n" + std::to_string(int(dims[k])) + ".csv", measures[k]);
  }
}

void berman_convergence(const ScenarioConfig& c, Context& ctx) {
  const TorusGrid grid = grid_of(c);
  const ThetaDensity theta = theta_of(c, grid);
  const MeasureDensity mu(measure_of(c, grid, "mu"));
  const GridField v = obstacle_of(c, grid, "obstacle").lower;
  NewtonOptions newton;
  newton.tol = c.get_double("newton_tol");
  const PsorOptions psor = psor_of(c);
  const PenalizationSchedule schedule = PenalizationSchedule::doubling(c.get_double("j_first"), c.get_double("j_last"));

  const BermanRun run = berman_envelope(theta, v, mu, schedule, newton, psor);
  for (std::size_t k = 0; k < run.reports.size(); ++k) {
    ctx.report("newton_j=" + io::format_double(run.rows[k].j), run.reports[k]);
  }
  ctx.table("berman.csv", run.table());
  ctx.grid("oracle.csv", run.oracle);
  ctx.grid("final.csv", run.iterates.back());

  const double scale = 1.0 + sup_abs(v);
  const double volume = theta.volume();
  if (c.get_string("expect") == "converge") {
    const double final_dist = run.rows.back().sup_dist;
    ctx.check("final_sup_dist", final_dist <= 1e-2 * scale, final_dist, 1e-2 * scale);
    double slack = std::numeric_limits<double>::infinity();
    for (const BermanRow& r : run.rows) slack = std::min(slack, r.min_slack);
    ctx.check("min_lower_bound_slack", slack >= -1e-8, slack, -1e-8);
    CapacityOptions cap;
    cap.psor = psor;
    const std::vector<double> metric = cap_convergence_metric(theta, run.iterates, run.oracle, c.get_double("cap_eps"), cap);
    io::Table t{{"j", "capacity"}, {}};
    for (std::size_t k = 0; k < metric.size(); ++k) t.rows.push_back({run.rows[k].j, metric[k]});
    ctx.table("cap_metric.csv", t);
    ctx.check("final_capacity_metric", metric.back() < 1e-3 * volume, metric.back(), 1e-3 * volume);
  } else {
    const ObstacleSolution plain = psor_envelope(theta, v, psor);
    ctx.report("psor", plain.report);
    ctx.grid("plain_envelope.csv", plain.u);
    const double to_zero = sup_abs(run.iterates.back());
    ctx.check("berman_limit_sup_norm", to_zero <= 1e-2 * scale, to_zero, 1e-2 * scale);
    const double osc = plain.u.max() - plain.u.min();
    ctx.check("plain_envelope_oscillation", osc > 1e-2, osc, 1e-2);
    const double gap = norms(run.iterates.back(), plain.u).sup;
    ctx.check("limit_difference", gap >= 0.5, gap, 0.5);
  }
}

void orthogonality(const ScenarioConfig& c, Context& ctx) {
  const TorusGrid grid = grid_of(c);
  const ThetaDensity theta = theta_of(c, grid);
  const PsorOptions psor = psor_of(c);
  const double amplitude = c.get_double("amplitude");
  io::Table table{{"kind", "id", "N", "defect"}, {}};
  double worst = 0.0;
  for (int k = 0; k < c.get_int("count"); ++k) {
    std::mt19937_64 rng(c.get_seed() + std::uint64_t(k));
    const GridField h = amplitude * random_trig_field(grid, rng);
    const ObstacleSolution env = psor_envelope(theta, h, psor);
    const double d = orthogonality_defect(theta, h, env.u);
    worst = std::max(worst, std::abs(d));
    table.rows.push_back({0.0, double(k), double(grid.n()), d});
  }
  const double volume = theta.volume();
  ctx.check("continuous_max_abs_defect", worst <= 1e-6 * volume, worst, 1e-6 * volume);

  double step[2] = {0.0, 0.0};
  for (int r = 0; r < 2; ++r) {
    const TorusGrid g(grid.n() << r);
    const ThetaDensity th = theta_of(c, g);
    const Obstacle h = obstacle_of(c, g, "step");
    const ObstacleSolution env = psor_envelope(th, h.lower, psor);
    ctx.report("psor_step_N=" + std::to_string(g.n()), env.report);
    step[r] = orthogonality_defect(th, h.value, env.u);
    table.rows.push_back({1.0, 0.0, double(g.n()), step[r]});
  }
  ctx.check("step_defect", step[0] >= 0.1 * volume, step[0], 0.1 * volume);
  const double drift = std::abs(step[1] / step[0] - 1.0);
  ctx.check("step_defect_refinement_drift", drift <= 0.2, drift, 0.2);
  ctx.table("orthogonality.csv", table);
}

void min_principle(const ScenarioConfig& c, Context& ctx) {
  const TorusGrid fine = grid_of(c);
  const PsorOptions psor = psor_of(c);
  io::Table table{{"pair", "N", "max_defect"}, {}};
  double worst[2] = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (int r = 0; r < 2; ++r) {
    const TorusGrid grid(fine.n() >> (1 - r));
    const ThetaDensity theta = theta_of(c, grid);
    for (int k = 0; k < c.get_int("pairs"); ++k) {
      std::mt19937_64 rng(c.get_seed() + std::uint64_t(k));
      const GridField u = random_psh_field(theta, rng);
      const GridField v = random_psh_field(theta, rng);
      const PminResult p = pmin_compose(theta, u, v, psor);
      worst[r] = std::max(worst[r], p.max_defect);
      table.rows.push_back({double(k), double(grid.n()), p.max_defect});
    }
  }
  ctx.table("partition.csv", table);
  const double volume = theta_of(c, fine).volume();
  ctx.check("max_partition_defect", worst[1] <= 1e-3 * volume, worst[1], 1e-3 * volume);
  // the discrete scheme can satisfy the inequality exactly, leaving nothing to halve
  const bool exact = worst[0] <= 0.0 && worst[1] <= 0.0;
  const bool halving = exact || (worst[1] >= 0.35 * worst[0] && worst[1] <= 0.65 * worst[0]);
  ctx.check("partition_defect_halving", halving, worst[1], 0.5 * worst[0]);
}

void perron(const ScenarioConfig& c, Context& ctx) {
  const TorusGrid grid = grid_of(c);
  const ThetaDensity theta = theta_of(c, grid);
  const MeasureDensity mu(measure_of(c, grid, "mu"));
  const NewtonResult reference = newton_ma_exponential(theta, mu, 1.0);
  ctx.report("newton_reference", reference.report);

  const int members = c.get_int("members");
  SupersolutionFamily family = growing_mask_family(theta, mu, members);
  const GridField sub = default_subsolution(theta, mu);
  PerronOptions options;
  options.max_members = members;
  options.tol = c.get_double("tol");
  options.solution_tol = c.get_double("solution_tol");
  options.check_tol = c.get_double("check_tol");
  options.psor = psor_of(c);
  const PerronResult result = perron_solve(theta, mu, family, sub, options);

  options.order.resize(std::size_t(members));
  std::iota(options.order.begin(), options.order.end(), 0);
  std::mt19937_64 rng(c.get_seed());
  std::shuffle(options.order.begin(), options.order.end(), rng);
  const PerronResult shuffled = perron_solve(theta, mu, family, sub, options);

  ctx.table("perron.csv", result.table());
  ctx.table("perron_shuffled.csv", shuffled.table());
  ctx.grid("perron_u.csv", result.u);
  const double err = norms(result.u, reference.phi).sup;
  ctx.check("sup_error_vs_newton", err <= 1e-3, err, 1e-3);
  const double order_gap = norms(result.u, shuffled.u).sup;
  ctx.check("shuffled_order_gap", order_gap <= 2e-3, order_gap, 2e-3);
}

std::vector<std::pair<std::string, GridField>> theorem_a_corpus(const ThetaDensity& theta, const GridField& f,
                                                                double ic_j) {
  const TorusGrid& grid = theta.grid();
  const MeasureDensity mu(f);
  const GridField s = newton_ma_exponential(theta, mu, 1.0).phi;
  GridField f2 = f;
  for (int i = 0; i < grid.n(); ++i) {
    const double g = 0.25 + 0.5 * std::pow(std::sin(kTwoPi * grid.x(i)), 2);
    for (int j = 0; j < grid.n(); ++j) f2(i, j) *= g;
  }
  const GridField w = newton_ma_exponential(theta, MeasureDensity(f2), 1.0).phi;
  if (!(f.min() > 0.0)) throw ConfigError("f: the inf-convolved step needs a positive density");
  const double c = std::log((theta.density().max() + 2.0 * ic_j / std::numbers::pi) / f.min()) + 0.1;
  GridField step = GridField::sample(grid, [c](double x, double y) {
    const double dx = x - 0.5, dy = y - 0.5;
    return dx * dx + dy * dy < 0.0625 ? c + 1.0 : c;
  });
  return {{"smooth", s + 0.5}, {"min-of-smooth", pointwise_min(s + 0.8, w)}, {"inf-convolved-step", inf_convolution(step, ic_j)}};
}

void theorem_a(const ScenarioConfig& c, Context& ctx) {
  const TorusGrid fine = grid_of(c);
  const double ic_j = c.get_double("ic_j");
  const double check_tol = c.get_double("check_tol");
  const PsorOptions psor = psor_of(c);
  io::Table table{{"member", "N", "residual", "violation", "checked_fraction"}, {}};
  std::vector<std::string> names;
  std::vector<double> residual[2], violation[2];
  double volume = 0.0;
  for (int r = 0; r < 2; ++r) {
    const TorusGrid grid(fine.n() >> (1 - r));
    const ThetaDensity theta = theta_of(c, grid);
    volume = theta.volume();
    const GridField f = measure_of(c, grid, "f");
    const auto corpus = theorem_a_corpus(theta, f, ic_j);
    names.clear();
    for (std::size_t m = 0; m < corpus.size(); ++m) {
      const PipelineResult p = theoremA_pipeline(theta, corpus[m].second, f, check_tol, psor);
      ctx.report("psor_" + corpus[m].first + "_N=" + std::to_string(grid.n()), p.solver);
      names.push_back(corpus[m].first);
      residual[r].push_back(p.residual);
      violation[r].push_back(std::max(p.residual, 0.0));
      table.rows.push_back({double(m), double(grid.n()), p.residual, violation[r].back(), p.input.checked_fraction});
    }
  }
  for (std::size_t m = 0; m < names.size(); ++m) {
    ctx.check("residual_" + names[m], residual[1][m] <= 1e-3 * volume, residual[1][m], 1e-3 * volume);
    ctx.check("violation_nonincreasing_" + names[m], violation[1][m] <= violation[0][m], violation[1][m],
              violation[0][m]);
  }
  ctx.table("theoremA.csv", table);
}

void weak_bd12(const ScenarioConfig& c, Context& ctx) {
  const TorusGrid grid = grid_of(c);
  const ThetaDensity theta = theta_of(c, grid);
  const ObstacleSolution v = psor_envelope(theta, GridField(grid, 0.0), psor_of(c));
  ctx.report("psor", v.report);
  const GridField ma = ma_density(theta, v.u);
  double excess = -std::numeric_limits<double>::infinity();
  std::size_t contact = 0;
  for (std::size_t k = 0; k < ma.size(); ++k) {
    const bool at_zero = std::abs(v.u[k]) < 1e-6;
    contact += at_zero;
    excess = std::max(excess, ma[k] - (at_zero ? std::max(theta.density()[k], 0.0) : 0.0));
  }
  ctx.grid("v_theta.csv", v.u);
  ctx.table("weak_bd12.csv", {{"N", "max_excess", "contact_fraction"},
                              {{double(grid.n()), excess, double(contact) / double(ma.size())}}});
  ctx.check("max_excess", excess <= 1e-6 * theta.volume(), excess, 1e-6 * theta.volume());
}

void capacity_sandwich(const ScenarioConfig& c, Context& ctx) {
  const TorusGrid grid = grid_of(c);
  const ThetaDensity theta = theta_of(c, grid);
  CapacityOptions options;
  options.tol = c.get_double("ipm_tol");
  options.seed = c.get_seed();
  const GridField v = extremal_function(theta, options.psor);
  std::mt19937_64 rng(c.get_seed());
  std::uniform_int_distribution<int> width(1, c.get_int("max_width"));
  std::uniform_int_distribution<int> pos(0, grid.n() - 1);
  io::Table table{{"mask", "t", "cap", "gcap", "lower_defect", "upper_defect", "lower_bound_mode"}, {}};
  double worst = 0.0;
  for (int m = 0; m < c.get_int("masks"); ++m) {
    const int w = width(rng), hgt = width(rng), i0 = pos(rng), j0 = pos(rng);
    Mask e(grid.size(), 0);
    for (int a = 0; a < w; ++a) {
      for (int b = 0; b < hgt; ++b) e[grid.index(i0 + a, j0 + b)] = 1;
    }
    const CapacityResult cap = capacity(theta, e, CapacityMode::exact, options);
    ctx.report("ipm_mask" + std::to_string(m), cap.report);
    for (double t : c.get_list("t")) {
      if (t < 1.0) throw ConfigError("t: sandwich parameters must be >= 1");
      const CapacityResult g = generalized_capacity(theta, v - t, v, e, CapacityMode::exact, options);
      const CapacityResult lb = generalized_capacity(theta, v - t, v, e, CapacityMode::lower_bound, options);
      const double lower = std::max(cap.value - g.value, 0.0);
      const double upper = std::max(g.value - t * cap.value, 0.0);
      worst = std::max({worst, lower, upper});
      table.rows.push_back({double(m), t, cap.value, g.value, lower, upper, lb.value});
    }
  }
  ctx.table("capacity.csv", table);
  ctx.check("sandwich_defect", worst <= 1e-8, worst, 1e-8);
}

void quasi_triangle(const ScenarioConfig& c, Context& ctx) {
  const TorusGrid grid = grid_of(c);
  const ThetaDensity theta = theta_of(c, grid);
  const int trials = c.get_int("trials");
  io::Table table{{"p", "trials", "violations", "worst_ratio", "constant"}, {}};
  nlohmann::json report = {{"seed", c.get_seed()}, {"trials", trials}, {"results", nlohmann::json::array()}};
  for (double p : c.get_list("p")) {
    if (!(p > 0.0)) throw ConfigError("p: exponents must be positive");
    int violations = 0;
    double worst = 0.0;
    int worst_trial = -1;
    for (int k = 0; k < trials; ++k) {
      std::mt19937_64 rng(c.get_seed() + std::uint64_t(k));
      const GridField u = random_psh_field(theta, rng);
      const GridField v = random_psh_field(theta, rng);
      const GridField w = random_psh_field(theta, rng);
      const QuasiTriangle q = quasi_triangle_check(theta, u, v, w, p);
      violations += !q.passed;
      if (q.ratio > worst) {
        worst = q.ratio;
        worst_trial = k;
      }
    }
    table.rows.push_back({p, double(trials), double(violations), worst, quasi_triangle_constant(p)});
    report["results"].push_back({{"p", p},
                                 {"violations", violations},
                                 {"worst_ratio", worst},
                                 {"worst_trial", worst_trial},
                                 {"constant", quasi_triangle_constant(p)}});
    ctx.check("violations_p=" + io::format_double(p), violations == 0, violations, 0.0);
  }
  ctx.table("quasi_triangle.csv", table);
  ctx.json("quasi_triangle.json", report);
}

void local_envelopes(const ScenarioConfig& c, Context& ctx) {
  const int m = c.get_int("M");
  const double t_min = c.get_double("t_min");
  if (m < 2 || !(t_min < 0.0)) throw ConfigError("M, t_min: need at least two samples on [t_min, 0] with t_min < 0");
  std::vector<double> t(static_cast<std::size_t>(m));
  std::vector<double> h(static_cast<std::size_t>(m), c.get_double("interior"));
  for (int i = 0; i < m; ++i) t[i] = t_min * double(m - 1 - i) / double(m - 1);
  h.back() = c.get_double("boundary");
  const auto inner = radial::local_envelope_ball(t, h, radial::BallMode::interior);
  const auto closed = radial::local_envelope_ball(t, h, radial::BallMode::closure);
  io::Table table{{"t", "interior", "closure"}, {}};
  double inner_err = 0.0, closed_err = 0.0;
  for (int i = 0; i < m; ++i) {
    table.rows.push_back({t[i], inner[i], closed[i]});
    inner_err = std::max(inner_err, std::abs(inner[i] - c.get_double("interior")));
    closed_err = std::max(closed_err, std::abs(closed[i] - c.get_double("boundary")));
  }
  ctx.table("local_envelopes.csv", table);
  ctx.check("interior_envelope_error", inner_err == 0.0, inner_err, 0.0);
  ctx.check("closure_envelope_error", closed_err == 0.0, closed_err, 0.0);
}

void mass_bound(const ScenarioConfig& c, Context& ctx) {
  const TorusGrid grid = grid_of(c);
  const ThetaDensity theta = theta_of(c, grid);
  const double tol = c.get_double("check_tol");
  const GridField low = measure_of(c, grid, "f_low");
  const GridField high = measure_of(c, grid, "f_high");

  const bool low_admissible = mass_bound_check(theta, low);
  ctx.check("low_mass_rejected", !low_admissible, integrate(low), theta.volume());
  io::Table table{{"seed", "worst_margin", "checked_fraction"}, {}};
  int found = 0;
  double closest = std::numeric_limits<double>::infinity();
  std::uniform_real_distribution<double> log_amp(-3.0, 1.0);
  std::uniform_real_distribution<double> shift(-2.0, 2.0);
  for (int k = 0; k < c.get_int("seeds"); ++k) {
    std::mt19937_64 rng(c.get_seed() + std::uint64_t(k));
    GridField u = random_trig_field(grid, rng);
    u *= std::pow(10.0, log_amp(rng));
    u += shift(rng);
    const ViscosityReport r = check_supersolution_visc(theta, u, plain_rhs(low), tol);
    found += r.passed;
    closest = std::min(closest, r.worst_margin);
    table.rows.push_back({double(k), r.worst_margin, r.checked_fraction});
  }
  ctx.table("mass_bound.csv", table);
  ctx.check("random_supersolutions_found", found == 0, found, 0.0);

  const bool high_admissible = mass_bound_check(theta, high);
  ctx.check("high_mass_accepted", high_admissible, integrate(high), theta.volume());
  const GridField witness = mass_bound_witness(theta, high);
  const ViscosityReport w = check_supersolution_visc(theta, witness, plain_rhs(high), tol);
  ctx.check("witness_margin", w.passed, w.worst_margin, tol);
  ctx.grid("witness.csv", witness);

  // Isolated downward spikes, the discrete analogue of -1 on a thin set.
  GridField thin(grid, 0.0);
  for (int i = 0; i < grid.n(); i += 4) {
    for (int j = 0; j < grid.n(); j += 4) thin(i, j) = -1.0;
  }
  const SemicontinuityReport smooth_sc = refined_semicontinuity_check(witness, 1e-9);
  const SemicontinuityReport thin_sc = refined_semicontinuity_check(thin, 1e-9);
  ctx.json("mass_bound.json", {{"seed", c.get_seed()},
                               {"seeds", c.get_int("seeds")},
                               {"integral_low", integrate(low)},
                               {"integral_high", integrate(high)},
                               {"volume", theta.volume()},
                               {"supersolutions_found", found},
                               {"closest_margin", closest},
                               {"witness_margin", w.worst_margin},
                               {"witness_checked_fraction", w.checked_fraction},
                               {"semicontinuity_smooth_passed", smooth_sc.passed},
                               {"semicontinuity_thin_set_violations", thin_sc.violations}});
}

}  // namespace

void Context::check(const std::string& name, bool passed, double value, double threshold) {
  manifest.checks.push_back({name, passed, value, threshold});
}

void Context::report(const std::string& name, const SolverReport& r) { manifest.reports.emplace_back(name, r); }

void Context::table(const std::string& name, const io::Table& t) { t.save(out_dir / name); }

void Context::grid(const std::string& name, const GridField& f) { io::save_csv(out_dir / name, f); }

void Context::json(const std::string& name, const nlohmann::json& j) {
  std::ofstream out(out_dir / name);
  if (!out) throw Error("cannot write " + (out_dir / name).string());
  out << j.dump(2) << '\n';
}

void dispatch(const ScenarioConfig& config, Context& ctx) {
  const std::string& s = config.scenario();
  if (s == "radial-ball") return radial_ball(config, ctx);
  if (s == "berman-convergence") return berman_convergence(config, ctx);
  if (s == "orthogonality") return orthogonality(config, ctx);
  if (s == "min-principle") return min_principle(config, ctx);
  if (s == "perron") return perron(config, ctx);
  if (s == "theoremA") return theorem_a(config, ctx);
  if (s == "weak-BD12") return weak_bd12(config, ctx);
  if (s == "capacity-sandwich") return capacity_sandwich(config, ctx);
  if (s == "quasi-triangle") return quasi_triangle(config, ctx);
  if (s == "local-envelopes") return local_envelopes(config, ctx);
  if (s == "mass-bound") return mass_bound(config, ctx);
  throw ConfigError("scenario: unknown scenario '" + s + "'");
}

}  // namespace maenv::runner
