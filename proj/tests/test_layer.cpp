#include <doctest.h>

#include <cmath>

#include "exitwell/errors.hpp"
#include "exitwell/fourier.hpp"
#include "exitwell/layer.hpp"
#include "exitwell/potential.hpp"

using namespace exitwell;

namespace {

DomainCurve unit_circle(int m = 128) {
  CurveSpec sp;
  sp.kind = CurveSpec::Kind::Circle;
  sp.radius = 1.0;
  return build_curve(sp, m);
}

Potential radial_quadratic() {
  PotentialSpec sp;
  sp.kind = PotentialSpec::Kind::RadialPower;
  sp.power = 2;
  sp.scale = 1.0;
  return build_potential(sp);
}

Potential aniso_quadratic() {
  PotentialSpec sp;
  sp.kind = PotentialSpec::Kind::QuadraticForm;
  sp.axx = 1.0;
  sp.axy = 0.0;
  sp.ayy = 2.0;
  return build_potential(sp);
}

struct Setup {
  DomainCurve curve;
  BoundaryTraces traces;
  MetricTaylor metric;
  LayerOperatorData ops;

  Setup(const Potential& pot, int jmax, int m = 128)
      : curve(unit_circle(m)),
        traces(boundary_traces(pot, curve, jmax)),
        metric(metric_taylor(curve, jmax)),
        ops(metric, traces, curve.length()) {}
};

}  // namespace

TEST_SUITE("layer") {

TEST_CASE("triangular solve on a constant-coefficient example") {
  // -P'' - theta1 P' = 1 + zeta with theta1 = -1 and P(0) = 0
  // gives P = 2 zeta + zeta^2/2
  const int m = 16;
  std::vector<double> th1(m, -1.0);
  LayerPolynomial rhs(1, m);
  for (int q = 0; q < m; ++q) {
    rhs.coeff[0][q] = 1.0;
    rhs.coeff[1][q] = 1.0;
  }
  const LayerPolynomial p = solve_layer_ode(th1, rhs, 0.0);
  REQUIRE(p.degree() == 2);
  for (int q = 0; q < m; ++q) {
    CHECK(p.coeff[0][q] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(p.coeff[1][q] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(p.coeff[2][q] == doctest::Approx(0.5).epsilon(1e-14));
  }
}

TEST_CASE("solve rejects nonnegative theta1") {
  std::vector<double> th1(8, -1.0);
  th1[3] = 0.0;
  LayerPolynomial rhs(0, 8);
  CHECK_THROWS_AS(solve_layer_ode(th1, rhs, 0.0), AssumptionError);
}

TEST_CASE("radial benchmark first corrections") {
  const Setup su(radial_quadratic(), 4);
  const auto phis = phi_sequence(2, su.ops);
  REQUIRE((int)phis.size() == 3);

  // Phi_0 is exactly the constant 1
  REQUIRE(phis[0].degree() == 0);
  for (int q = 0; q < su.curve.grid_size(); ++q)
    CHECK(phis[0].coeff[0][q] == 1.0);

  // first correction: Phi_1 = 2 zeta + zeta^2/2 everywhere on the circle
  REQUIRE(phis[1].degree() == 2);
  for (int q = 0; q < su.curve.grid_size(); q += 3) {
    CHECK(phis[1].coeff[0][q] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(phis[1].coeff[1][q] == doctest::Approx(2.0).epsilon(1e-11));
    CHECK(phis[1].coeff[2][q] == doctest::Approx(0.5).epsilon(1e-11));
  }

  const auto us = u_sequence(2, phis, su.ops);
  REQUIRE((int)us.size() == 2);
  // U_1 = zeta;  U_2 = 4 zeta + 5/2 zeta^2 + 1/2 zeta^3
  REQUIRE(us[0].degree() == 1);
  REQUIRE(us[1].degree() == 3);
  for (int q = 0; q < su.curve.grid_size(); q += 3) {
    CHECK(us[0].coeff[1][q] == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(us[1].coeff[1][q] == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(us[1].coeff[2][q] == doctest::Approx(2.5).epsilon(1e-10));
    CHECK(us[1].coeff[3][q] == doctest::Approx(0.5).epsilon(1e-10));
  }
}

TEST_CASE("closed forms for the first corrections, varying trace") {
  // With Phi_fn = theta0' theta1' + 2 theta1 theta2 (primes = d/ds):
  //   Phi_1 = c1 zeta + c2 zeta^2,  c2 = Phi_fn/(2 theta1),
  //   c1 = -(Theta_1 + Phi_fn/theta1^2)
  const Setup su(aniso_quadratic(), 4);
  const auto phis = phi_sequence(1, su.ops);
  const int m = su.curve.grid_size();
  const std::vector<double>& th1 = su.ops.theta1();
  const std::vector<double>& th2 = su.ops.theta(2);
  const std::vector<double>& d0 = su.ops.theta_ds(0);
  const std::vector<double>& d1 = su.ops.theta_ds(1);
  const std::vector<double>& bt1 = su.ops.big_theta(1);
  for (int q = 0; q < m; q += 5) {
    const double fn = d0[q] * d1[q] + 2 * th1[q] * th2[q];
    const double c2 = fn / (2 * th1[q]);
    const double c1 = -(bt1[q] + fn / (th1[q] * th1[q]));
    CHECK(phis[1].coeff[1][q] == doctest::Approx(c1).epsilon(1e-10));
    CHECK(phis[1].coeff[2][q] == doctest::Approx(c2).epsilon(1e-10));
  }

  // U_2 from the same data:
  //   f0 = -Theta_1/theta1
  //   f1 = -2 Theta_1 - Phi_fn/theta1^2 + 2 theta2/theta1 - theta0' theta1'/theta1^2
  //   f2 = Phi_fn/(2 theta1) + 2 theta2 + theta0' theta1'/theta1
  //   p3 = -f2/(3 theta1), p2 = (2 f2/theta1 - f1)/(2 theta1),
  //   p1 = -(f0 + 2 p2)/theta1
  const auto us = u_sequence(2, phi_sequence(2, su.ops), su.ops);
  for (int q = 0; q < m; q += 5) {
    const double t1 = th1[q], t2 = th2[q], bt = bt1[q];
    const double fn = d0[q] * d1[q] + 2 * t1 * t2;
    const double dd = d0[q] * d1[q];
    const double f0 = -bt / t1;
    const double f1 = -2 * bt - fn / (t1 * t1) + 2 * t2 / t1 - dd / (t1 * t1);
    const double f2 = fn / (2 * t1) + 2 * t2 + dd / t1;
    const double p3 = -f2 / (3 * t1);
    const double p2 = (2 * f2 / t1 - f1) / (2 * t1);
    const double p1 = -(f0 + 2 * p2) / t1;
    CHECK(us[1].coeff[1][q] == doctest::Approx(p1).epsilon(1e-9));
    CHECK(us[1].coeff[2][q] == doctest::Approx(p2).epsilon(1e-9));
    CHECK(us[1].coeff[3][q] == doctest::Approx(p3).epsilon(1e-9));
  }
}

TEST_CASE("degrees are exactly 2j and 2j-1") {
  const Setup su(aniso_quadratic(), 6);
  const auto phis = phi_sequence(4, su.ops);
  const auto us = u_sequence(4, phis, su.ops);
  for (int j = 0; j <= 4; ++j) CHECK(phis[j].degree() == 2 * j);
  for (int j = 1; j <= 4; ++j) CHECK(us[j - 1].degree() == 2 * j - 1);
  // zero boundary values for the corrections
  for (int j = 1; j <= 4; ++j)
    for (int q = 0; q < su.curve.grid_size(); q += 11) {
      CHECK(phis[j].coeff[0][q] == 0.0);
      CHECK(us[j - 1].coeff[0][q] == 0.0);
    }
}

TEST_CASE("hierarchy residuals vanish") {
  // each Phi_j must solve -P'' - theta1 P' = sum_i L_i Phi_{j-1-i}
  const Setup su(aniso_quadratic(), 5);
  const auto phis = phi_sequence(3, su.ops);
  const auto us = u_sequence(3, phis, su.ops);
  const std::vector<double>& th1 = su.ops.theta1();
  for (int j = 1; j <= 3; ++j) {
    LayerPolynomial g(0, su.curve.grid_size());
    auto add = [&](const LayerPolynomial& t) {
      if (t.degree() > g.degree())
        g.coeff.resize(t.degree() + 1,
                       std::vector<double>(su.curve.grid_size(), 0.0));
      for (int mm = 0; mm <= t.degree(); ++mm)
        for (int q = 0; q < su.curve.grid_size(); ++q)
          g.coeff[mm][q] += t.coeff[mm][q];
    };
    for (int i = 0; i <= j - 1; ++i)
      add(apply_layer_operator(i, phis[j - 1 - i], su.ops));
    for (int q = 0; q < su.curve.grid_size(); q += 7) {
      for (double zeta : {0.0, 0.4, 1.7, 3.2}) {
        const double resid = -phis[j].poly_d2(q, zeta) -
                             th1[q] * phis[j].poly_d1(q, zeta) -
                             g.poly(q, zeta);
        CHECK(std::fabs(resid) < 1e-9 * std::max(1.0, std::fabs(g.poly(q, zeta))));
      }
    }
  }
  // and U_j must solve the same ODE with rhs Phi_{j-1} + sum_i L_i U_{j-1-i}
  for (int j = 1; j <= 3; ++j) {
    LayerPolynomial f = phis[j - 1];
    auto add = [&](const LayerPolynomial& t) {
      if (t.degree() > f.degree())
        f.coeff.resize(t.degree() + 1,
                       std::vector<double>(su.curve.grid_size(), 0.0));
      for (int mm = 0; mm <= t.degree(); ++mm)
        for (int q = 0; q < su.curve.grid_size(); ++q)
          f.coeff[mm][q] += t.coeff[mm][q];
    };
    for (int i = 0; i <= j - 2; ++i)
      add(apply_layer_operator(i, us[j - 2 - i], su.ops));
    for (int q = 0; q < su.curve.grid_size(); q += 7) {
      for (double zeta : {0.0, 0.9, 2.6}) {
        const double resid = -us[j - 1].poly_d2(q, zeta) -
                             th1[q] * us[j - 1].poly_d1(q, zeta) -
                             f.poly(q, zeta);
        CHECK(std::fabs(resid) < 1e-9 * std::max(1.0, std::fabs(f.poly(q, zeta))));
      }
    }
  }
}

TEST_CASE("layer moments against factorial identities") {
  const int m = 8;
  std::vector<double> th1(m, -1.0);
  LayerPolynomial p(1, m);
  for (int q = 0; q < m; ++q) p.coeff[1][q] = 1.0;  // p = zeta
  const auto m0 = layer_zeta_moment(p, 0, th1);
  const auto m1 = layer_zeta_moment(p, 1, th1);
  for (int q = 0; q < m; ++q) {
    CHECK(m0[q] == doctest::Approx(1.0).epsilon(1e-14));   // 1! / 1
    CHECK(m1[q] == doctest::Approx(2.0).epsilon(1e-14));   // 2! / 1
  }
  std::vector<double> th2(m, -2.0);
  LayerPolynomial p2(2, m);
  for (int q = 0; q < m; ++q) p2.coeff[2][q] = 1.0;  // p = zeta^2
  const auto n0 = layer_zeta_moment(p2, 0, th2);
  for (int q = 0; q < m; ++q)
    CHECK(n0[q] == doctest::Approx(0.25).epsilon(1e-14));  // 2! / 2^3
}

}  // TEST_SUITE
