#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "maenv/errors.hpp"
#include "maenv/ma_equations.hpp"
#include "maenv/torus.hpp"

using namespace maenv;

namespace {

constexpr double pi = std::numbers::pi;

double mu_x(double x) { return 1 + 0.5 * std::cos(2 * pi * x); }

// 1 + D2 phi / (2 pi) = e^phi mu on n periodic points, solved by plain Newton with a dense matrix.
// `d2` is the second-derivative matrix.
Eigen::VectorXd newton_1d(const Eigen::MatrixXd& d2) {
  const int n = int(d2.rows());
  Eigen::VectorXd mu(n), phi = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) mu[i] = mu_x(double(i) / n);
  for (int it = 0; it < 50; ++it) {
    Eigen::VectorXd e = (phi.array().exp() * mu.array()).matrix();
    Eigen::VectorXd f = Eigen::VectorXd::Ones(n) + d2 * phi / (2 * pi) - e;
    if (f.lpNorm<Eigen::Infinity>() < 1e-14) break;
    Eigen::MatrixXd jac = d2 / (2 * pi);
    jac.diagonal() -= e;
    phi -= jac.fullPivLu().solve(f);
  }
  return phi;
}

Eigen::MatrixXd fd_second_difference(int n) {
  Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(n, n);
  const double inv = double(n) * n;
  for (int i = 0; i < n; ++i) {
    d2(i, i) = -2 * inv;
    d2(i, (i + 1) % n) += inv;
    d2(i, (i + n - 1) % n) += inv;
  }
  return d2;
}

// Fourier collocation second derivative: column j is the spectral derivative of e_j.
Eigen::MatrixXd spectral_second_derivative(int n) {
  Eigen::MatrixXd d2(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      double s = 0;
      for (int k = -n / 2 + 1; k <= n / 2; ++k) {
        const double w = (k == n / 2) ? 0.0 : -std::pow(2 * pi * k, 2);
        s += w * std::cos(2 * pi * k * (i - j) / double(n));
      }
      d2(i, j) = s / n;
    }
  }
  return d2;
}

GridField x_only(int n, const Eigen::VectorXd& phi) {
  GridField out{TorusGrid(n)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = phi[i];
  return out;
}

GridField bump(int n, double cx, double cy, double amp) {
  return GridField::sample(TorusGrid(n), [=](double x, double y) {
    return amp * std::cos(2 * pi * (x - cx)) + amp * std::cos(2 * pi * (y - cy));
  });
}

}  // namespace

TEST_CASE("newton_ma_exponential") {
  SUBCASE("constant data") {
    TorusGrid g(16);
    for (double beta : {0.5, 1.0, 3.0}) {
      NewtonResult r = newton_ma_exponential(ThetaDensity::constant(g, 2.0), MeasureDensity::constant(g, 2.0), beta);
      CHECK(norms(r.phi, GridField(g)).sup < 1e-12);
    }
    NewtonResult r = newton_ma_exponential(ThetaDensity::constant(g, 1.0), MeasureDensity::constant(g, std::exp(1.0)), 1.0);
    CHECK(norms(r.phi, GridField(g, -1.0)).sup < 1e-12);
  }
  SUBCASE("x-only data against a same-grid one-dimensional solve") {
    const int n = 64;
    TorusGrid g(n);
    MeasureDensity mu(GridField::sample(g, [](double x, double) { return mu_x(x); }));
    NewtonResult r = newton_ma_exponential(ThetaDensity::constant(g, 1.0), mu, 1.0, {.tol = 1e-13});
    CHECK(norms(r.phi, x_only(n, newton_1d(fd_second_difference(n)))).sup < 1e-11);
  }
  SUBCASE("x-only data against a spectral one-dimensional solve") {
    const Eigen::VectorXd spectral = newton_1d(spectral_second_derivative(128));
    std::vector<double> err;
    std::vector<GridField> sols;
    for (int n : {128, 256}) {
      TorusGrid g(n);
      MeasureDensity mu(GridField::sample(g, [](double x, double) { return mu_x(x); }));
      sols.push_back(newton_ma_exponential(ThetaDensity::constant(g, 1.0), mu, 1.0, {.tol = 1e-11}).phi);
      const int stride = n / 128;
      double e = 0;
      for (int i = 0; i < 128; ++i) e = std::max(e, std::abs(sols.back()(i * stride, 0) - spectral[i]));
      err.push_back(e);
    }
    // second order: the error quarters, and Richardson extrapolation removes it
    CHECK(err[1] < 1e-5);
    CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.05));
    double rich = 0;
    for (int i = 0; i < 128; ++i) rich = std::max(rich, std::abs((4 * sols[1](2 * i, 0) - sols[0](i, 0)) / 3 - spectral[i]));
    CHECK(rich < 1e-6);
  }
  SUBCASE("nonpositive beta") {
    TorusGrid g(8);
    CHECK_THROWS_AS(newton_ma_exponential(ThetaDensity::constant(g, 1), MeasureDensity::constant(g, 1), 0.0),
                    InvalidArgument);
  }
}

TEST_CASE("supersolution and subsolution checks") {
  TorusGrid g(32);
  ThetaDensity theta = ThetaDensity::constant(g, 1.0);
  MeasureDensity mu(GridField::sample(g, [](double x, double y) { return 1 + 0.5 * std::cos(2 * pi * x) * std::cos(2 * pi * y); }));
  const GridField phi = newton_ma_exponential(theta, mu, 1.0).phi;
  CHECK(supersolution_check(theta, phi, mu, 1e-8).passed);
  CHECK(subsolution_check(theta, phi, mu, 1e-8).passed);
  ResidualReport up = supersolution_check(theta, phi + 1.0, mu, 0.0);
  CHECK(up.passed);
  CHECK(up.worst < 0.0);
  ResidualReport down = supersolution_check(theta, phi - 1.0, mu, 1e-8);
  CHECK_FALSE(down.passed);
  // residual e^phi mu (1 - e^-1) at the worst site
  CHECK(down.worst == doctest::Approx(std::exp(phi[down.site]) * mu.density()[down.site] * (1 - std::exp(-1.0))).epsilon(1e-6));
  CHECK(subsolution_check(theta, phi - 1.0, mu, 0.0).passed);
}

TEST_CASE("solve_two_measure") {
  TorusGrid g(16);
  ThetaDensity theta = ThetaDensity::constant(g, 1.0);
  SUBCASE("constants: soft minimum") {
    const double a = 0.3, b = -0.2;
    for (double beta : {1.0, 4.0, 64.0}) {
      NewtonResult r = solve_two_measure(theta, GridField(g, a), GridField(g, b), beta);
      const double exact = -std::log(std::exp(-beta * a) + std::exp(-beta * b)) / beta;
      CHECK(norms(r.phi, GridField(g, exact)).sup < 1e-10);
    }
  }
  SUBCASE("equal inputs reduce to one measure") {
    const GridField u = bump(16, 0.1, 0.3, 0.05);
    NewtonResult r = solve_two_measure(theta, u, u, 1.0);
    // theta + dd^c phi = 2 e^{phi - u} ma(u): shift by log of the measure
    GridField m = ma_positive(theta, u);
    GridField weight = m;
    for (std::size_t k = 0; k < weight.size(); ++k) weight[k] = 2 * m[k] * std::exp(-u[k]);
    NewtonResult single = newton_ma_exponential(theta, MeasureDensity(weight), 1.0);
    CHECK(norms(r.phi, single.phi).sup < 1e-9);
  }
  SUBCASE("large beta approaches P(min)") {
    const int n = 32;
    ThetaDensity t32 = ThetaDensity::constant(TorusGrid(n), 1.0);
    const GridField u = bump(n, 0.0, 0.0, 0.05);
    const GridField v = bump(n, 0.5, 0.25, 0.05) + 0.01;
    NewtonResult r = solve_two_measure(t32, u, v, 16384.0);
    CHECK(norms(r.phi, pmin_compose(t32, u, v).phi).sup < 1e-2);
  }
  SUBCASE("inputs must be psh") {
    const GridField bad = bump(16, 0, 0, 1.0);
    CHECK_THROWS_AS(solve_two_measure(theta, bad, GridField(g), 1.0), InvalidArgument);
  }
}

TEST_CASE("pmin_compose") {
  const int n = 64;
  ThetaDensity theta = ThetaDensity::constant(TorusGrid(n), 1.0);
  const GridField u = bump(n, 0.0, 0.0, 0.05);
  SUBCASE("ordered inputs") {
    PminResult r = pmin_compose(theta, u - 1.0, u);
    CHECK(norms(r.phi, u - 1.0).sup < 1e-9);
    CHECK(r.max_defect <= 1e-8);
  }
  SUBCASE("equal inputs") {
    PminResult r = pmin_compose(theta, u, u);
    CHECK(norms(r.phi, u).sup < 1e-9);
  }
  SUBCASE("crossing bumps: defect shrinks under refinement") {
    std::vector<double> d;
    for (int m : {32, 64}) {
      ThetaDensity t = ThetaDensity::constant(TorusGrid(m), 1.0);
      d.push_back(pmin_compose(t, bump(m, 0.0, 0.0, 0.05), bump(m, 0.5, 0.25, 0.05) + 0.01).max_defect);
    }
    CHECK(d[1] <= d[0] + 1e-12);
    CHECK(d[1] < 5e-2);
  }
}

TEST_CASE("perron_solve") {
  const int n = 32;
  TorusGrid g(n);
  ThetaDensity theta(GridField::sample(g, [](double x, double) { return 1 + 0.5 * std::cos(2 * pi * x); }));
  MeasureDensity mu(GridField::sample(g, [](double x, double y) { return 1 + 0.5 * std::sin(2 * pi * (x + y)); }));
  const GridField exact = newton_ma_exponential(theta, mu, 1.0).phi;
  const GridField sub = default_subsolution(theta, mu);
  CHECK(subsolution_check(theta, sub, mu, 1e-9).passed);
  SUBCASE("single exact member") {
    SupersolutionFamily fam = SupersolutionFamily::from_members({exact});
    PerronResult r = perron_solve(theta, mu, fam, sub);
    CHECK(norms(r.u, exact).sup == 0.0);
  }
  SUBCASE("growing masks converge to the solution") {
    SupersolutionFamily fam = growing_mask_family(theta, mu, 6);
    PerronResult r = perron_solve(theta, mu, fam, sub);
    CHECK(norms(r.u, exact).sup < 1e-3);
    CHECK(r.table().rows.size() == 6);
  }
  SUBCASE("min of two supersolutions") {
    SupersolutionFamily fam = SupersolutionFamily::from_members({exact + 0.5, GridField::sample(g, [&](double x, double y) {
      return 0.5 + 0.01 * std::sin(2 * pi * y) * std::sin(2 * pi * x);
    }) + exact});
    const GridField b = *fam.member(1);
    REQUIRE(supersolution_check(theta, b, mu, 1e-7).passed);
    PminResult m = pmin_compose(theta, exact + 0.5, b);
    CHECK(supersolution_check(theta, m.phi, mu, 1e-7).passed);
  }
  SUBCASE("bad subsolution and exhausted family") {
    SupersolutionFamily fam = SupersolutionFamily::from_members({exact + 1.0, exact + 0.5});
    CHECK_THROWS_AS(perron_solve(theta, mu, fam, exact + 0.1), NoSubsolution);
    CHECK_THROWS_AS(perron_solve(theta, mu, fam, sub), FamilyExhausted);
  }
}

TEST_CASE("glue_supersolution") {
  const int n = 32;
  TorusGrid g(n);
  ThetaDensity theta = ThetaDensity::constant(g, 1.0);
  MeasureDensity mu(GridField::sample(g, [](double x, double) { return 1 + 0.5 * std::cos(2 * pi * x); }));
  const GridField u = newton_ma_exponential(theta, mu, 1.0).phi + 0.5;
  Mask ball(g.size(), 0);
  for (int i = 10; i < 22; ++i)
    for (int j = 8; j < 20; ++j) ball[g.index(i, j)] = 1;
  SUBCASE("restriction of the global function") {
    GlueResult r = glue_supersolution(theta, u, u, ball, mu);
    CHECK(norms(r.envelope, u).sup < 1e-9);
    CHECK(r.check.passed);
  }
  SUBCASE("local Dirichlet solve glues into a supersolution") {
    NewtonResult local = local_dirichlet_solve(theta, mu, ball, u);
    for (std::size_t k = 0; k < u.size(); ++k) {
      if (ball[k]) CHECK(local.phi[k] <= u[k] + 1e-12);
      else CHECK(local.phi[k] == u[k]);
    }
    GlueResult r = glue_supersolution(theta, u, local.phi, ball, mu);
    CHECK(r.check.passed);
  }
  SUBCASE("whole grid") {
    Mask all(g.size(), 1);
    const GridField v = u - 0.2;
    GlueResult r = glue_supersolution(theta, u, v, all, mu);
    CHECK(norms(r.envelope, psor_envelope(theta, v).u).sup < 1e-12);
  }
  SUBCASE("boundary trace violation") {
    Mask small(g.size(), 0);
    small[g.index(5, 5)] = 1;
    CHECK_THROWS_AS(glue_supersolution(theta, u, u - 1.0, small, mu), BoundaryTraceViolation);
  }
}
