#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "maenv/envelope.hpp"
#include "maenv/errors.hpp"
#include "maenv/torus.hpp"

using namespace maenv;

namespace {

constexpr double pi = std::numbers::pi;

ThetaDensity theta_cos(int n, double a, double b) {
  return ThetaDensity(GridField::sample(TorusGrid(n), [a, b](double x, double) { return a + b * std::cos(2 * pi * x); }));
}

// Lower convex hull of the points (i, y_i), evaluated back at every integer i.
std::vector<double> lower_hull(const std::vector<double>& y) {
  std::vector<int> h;
  auto cross = [&](int o, int a, int b) {
    return double(a - o) * (y[b] - y[o]) - (y[a] - y[o]) * double(b - o);
  };
  for (int i = 0; i < int(y.size()); ++i) {
    while (h.size() >= 2 && cross(h[h.size() - 2], h.back(), i) <= 0) h.pop_back();
    h.push_back(i);
  }
  std::vector<double> out(y.size());
  for (std::size_t s = 0; s + 1 < h.size(); ++s)
    for (int i = h[s]; i <= h[s + 1]; ++i)
      out[i] = y[h[s]] + (y[h[s + 1]] - y[h[s]]) * double(i - h[s]) / double(h[s + 1] - h[s]);
  return out;
}

// Discrete 1-D envelope of the zero obstacle for an x-only density: with
// phi'' = -2 pi h^2 theta, w = phi + hull(-phi). Three periods, middle one returned.
std::vector<double> hull_oracle_1d(const std::vector<double>& theta) {
  const int n = int(theta.size());
  const double h = 1.0 / n;
  std::vector<double> phi(3 * n);
  phi[0] = 0.0;
  phi[1] = 0.0;
  for (int i = 1; i + 1 < 3 * n; ++i) phi[i + 1] = 2 * phi[i] - phi[i - 1] - 2 * pi * h * h * theta[i % n];
  std::vector<double> neg(3 * n);
  for (int i = 0; i < 3 * n; ++i) neg[i] = -phi[i];
  const auto c = lower_hull(neg);
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = phi[n + i] + c[n + i];
  return w;
}

// -1 on the single column x = 1/2, 0 elsewhere, and a measure vanishing exactly there.
GridField column(int n) {
  GridField v{TorusGrid(n)};
  for (int j = 0; j < n; ++j) v(n / 2, j) = -1.0;
  return v;
}

GridField step_field(int n, bool open) {
  return GridField::sample(TorusGrid(n), [open](double x, double) {
    const double d = std::abs(x - 0.5);
    return (open ? d < 0.25 : d <= 0.25) ? -1.0 : 0.0;
  });
}

}  // namespace

TEST_CASE("psor_envelope") {
  SUBCASE("semipositive theta leaves the zero obstacle alone") {
    ThetaDensity theta = theta_cos(32, 1.0, 0.5);
    ObstacleSolution s = psor_envelope(theta, GridField(theta.grid()));
    CHECK(s.u.min() > -1e-12);
    CHECK(s.u.max() <= 0.0);
    CHECK(s.report.converged);
  }
  SUBCASE("signed theta against the one-dimensional hull oracle") {
    const int n = 64;
    ThetaDensity theta = theta_cos(n, 1.0, 2.0);
    ObstacleSolution s = psor_envelope(theta, GridField(theta.grid()), {.tol = 1e-11});
    std::vector<double> th(n);
    for (int i = 0; i < n; ++i) th[i] = theta.density()(i, 0);
    const auto w = hull_oracle_1d(th);
    double err = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) err = std::max(err, std::abs(s.u(i, j) - w[i]));
    CHECK(err < 1e-9);
    CHECK(s.u.min() < -0.05);
    // contact band around x = 0 where theta is positive
    CHECK(s.contact[theta.grid().index(0, 0)]);
    CHECK_FALSE(s.contact[theta.grid().index(n / 2, 0)]);
    CHECK(ma_density(theta, s.u).min() > -1e-9);
  }
  SUBCASE("minimum of two psh functions has no mass off contact") {
    ThetaDensity theta = ThetaDensity::constant(TorusGrid(64), 1.0);
    GridField a = GridField::sample(theta.grid(), [](double x, double) { return 0.1 * std::cos(2 * pi * x); });
    GridField b = GridField::sample(theta.grid(), [](double, double y) { return 0.1 * std::sin(2 * pi * y) + 0.05; });
    const GridField h = pointwise_min(a, b);
    ObstacleSolution s = psor_envelope(theta, h);
    CHECK(std::abs(s.complementarity_defect) < 1e-8);
    CHECK(std::abs(orthogonality_defect(theta, h, s.u)) < 1e-8);
    CHECK((h - s.u).min() >= -1e-14);
  }
  SUBCASE("non-convergence is reported with the best iterate") {
    ThetaDensity theta = theta_cos(32, 1.0, 2.0);
    try {
      psor_envelope(theta, GridField(theta.grid()), {.tol = 1e-14, .max_iter = 3});
      FAIL("expected NonConvergence");
    } catch (const NonConvergence& e) {
      CHECK(e.best().has_value());
      CHECK_FALSE(e.report().converged);
    }
  }
}

TEST_CASE("envelope_mu") {
  ThetaDensity theta = ThetaDensity::constant(TorusGrid(32), 1.0);
  const GridField v = step_field(32, false);
  SUBCASE("full support agrees with the plain envelope") {
    MeasureDensity mu(GridField::sample(theta.grid(), [](double x, double y) { return 1 + 0.5 * std::cos(2 * pi * (x - y)); }));
    CHECK(norms(envelope_mu(theta, v, mu).u, psor_envelope(theta, v).u).sup < 1e-9);
  }
  SUBCASE("measure vanishing where the obstacle is -1") {
    // the unconstrained column may rise by at most pi h^2 above its neighbours
    for (int n : {32, 64}) {
      ThetaDensity t = ThetaDensity::constant(TorusGrid(n), 1.0);
      const GridField c = column(n);
      MeasureDensity mu(c + 1.0);
      GridField u = envelope_mu(t, c, mu).u;
      CHECK(u.min() > -1e-9);
      CHECK(u.max() <= pi / (n * n) + 1e-9);
      CHECK(psor_envelope(t, c).u.min() < -0.5);
    }
  }
  SUBCASE("constants pass through") {
    MeasureDensity mu(column(32) + 1.0);
    GridField u = envelope_mu(theta, GridField(theta.grid(), 2.5), mu).u;
    CHECK(u.min() > 2.5 - 1e-9);
    CHECK(u.max() <= 2.5 + pi / (32 * 32) + 1e-9);
    MeasureDensity full = MeasureDensity::constant(theta.grid(), 0.5);
    CHECK(norms(envelope_mu(theta, GridField(theta.grid(), 2.5), full).u, GridField(theta.grid(), 2.5)).sup < 1e-9);
  }
}

TEST_CASE("penalization schedule") {
  PenalizationSchedule s;
  CHECK(s.j_values().size() == 15);
  CHECK(s.j_values().front() == 1.0);
  CHECK(s.j_values().back() == 16384.0);
  CHECK(PenalizationSchedule::doubling(4, 32).j_values() == std::vector<double>{4, 8, 16, 32});
  CHECK_THROWS_AS(PenalizationSchedule(std::vector<double>{2, 1}), InvalidArgument);
}

TEST_CASE("berman_step") {
  TorusGrid g(16);
  ThetaDensity theta = ThetaDensity::constant(g, 1.0);
  MeasureDensity mu = MeasureDensity::constant(g, 1.0);
  for (double c : {0.0, -0.7, 1.3}) {
    for (double j : {1.0, 64.0}) {
      NewtonResult r = berman_step(theta, GridField(g, c), mu, j, GridField(g, 0.0));
      CHECK(norms(r.phi, GridField(g, c)).sup < 1e-10);
      r = berman_step(theta, GridField(g, c), mu, j, berman_initial_guess(GridField(g, c)));
      CHECK(norms(r.phi, GridField(g, c)).sup < 1e-10);
      CHECK(r.report.converged);
    }
  }
}

TEST_CASE("berman_envelope") {
  SUBCASE("step obstacle approaches the oracle") {
    const int n = 128;
    ThetaDensity theta = ThetaDensity::constant(TorusGrid(n), 1.0);
    MeasureDensity mu = MeasureDensity::constant(theta.grid(), 1.0);
    BermanRun run = berman_envelope(theta, step_field(n, false), mu, PenalizationSchedule::doubling(1, 1024));
    CHECK(run.rows.back().sup_dist < 5e-3);
    for (const BermanRow& r : run.rows) CHECK(r.min_slack >= -1e-8);
  }
  SUBCASE("continuous obstacle: distances shrink") {
    ThetaDensity theta = theta_cos(32, 1.0, 0.5);
    MeasureDensity mu = MeasureDensity::constant(theta.grid(), 1.0);
    GridField v = GridField::sample(theta.grid(), [](double x, double y) {
      return 0.3 * std::cos(2 * pi * x) * std::sin(2 * pi * y) - 0.2 * std::cos(4 * pi * y);
    });
    BermanRun run = berman_envelope(theta, v, mu, PenalizationSchedule());
    for (std::size_t k = 1; k < run.rows.size(); ++k) CHECK(run.rows[k].sup_dist <= run.rows[k - 1].sup_dist + 1e-12);
    CHECK(run.rows.back().sup_dist < 1e-2 * (1 + 0.5));
    CHECK(run.table().rows.size() == 15);
  }
  SUBCASE("zero obstacle, semipositive theta") {
    ThetaDensity theta = ThetaDensity::constant(TorusGrid(16), 1.0);
    MeasureDensity mu = MeasureDensity::constant(theta.grid(), 1.0);
    BermanRun run = berman_envelope(theta, GridField(theta.grid()), mu, PenalizationSchedule::doubling(1, 64));
    for (const GridField& it : run.iterates) CHECK(norms(it, GridField(theta.grid())).sup < 1e-10);
  }
  SUBCASE("measure null on the -1 set: the limit is 0, not the plain envelope") {
    const int n = 32;
    ThetaDensity theta = ThetaDensity::constant(TorusGrid(n), 1.0);
    const GridField v = column(n);
    MeasureDensity mu(v + 1.0);
    BermanRun run = berman_envelope(theta, v, mu, PenalizationSchedule::doubling(1, 4096));
    CHECK(norms(run.iterates.back(), GridField(theta.grid())).sup < 5e-3);
    CHECK(norms(run.iterates.back(), run.oracle).sup < 5e-3);
    CHECK(norms(run.iterates.back(), psor_envelope(theta, v).u).sup > 0.5);
  }
}

TEST_CASE("check_lower_bound") {
  TorusGrid g(8);
  const double c = -0.4;
  for (double j : {1.0, 2.0, 100.0}) {
    const double slack = check_lower_bound(GridField(g, c), GridField(g, c), GridField(g, 0.0), j, c);
    CHECK(slack == doctest::Approx(std::log(j) / j));
  }
  GridField phi1 = GridField::sample(g, [](double x, double) { return std::sin(2 * pi * x); });
  GridField fixed = GridField::sample(g, [](double, double y) { return std::cos(2 * pi * y); });
  double direct = 1e300;
  for (std::size_t k = 0; k < phi1.size(); ++k) direct = std::min(direct, phi1[k] - fixed[k] - 0.25);
  CHECK(check_lower_bound(phi1, GridField(g, 9.0), fixed, 1.0, 0.25) == doctest::Approx(direct));
}

TEST_CASE("orthogonality_defect") {
  ThetaDensity theta = ThetaDensity::constant(TorusGrid(32), 1.0);
  CHECK(orthogonality_defect(theta, GridField(theta.grid()), psor_envelope(theta, GridField(theta.grid())).u) == 0.0);
  SUBCASE("step obstacle: positive and stable under refinement") {
    std::vector<double> d;
    for (int n : {32, 64}) {
      ThetaDensity t = ThetaDensity::constant(TorusGrid(n), 1.0);
      GridField env = psor_envelope(t, step_field(n, false)).u;
      d.push_back(orthogonality_defect(t, step_field(n, true), env));
    }
    CHECK(d[0] > 0.1);
    CHECK(d[1] == doctest::Approx(d[0]).epsilon(0.2));
  }
}
