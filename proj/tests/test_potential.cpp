#include <doctest.h>

#include <cmath>

#include "exitwell/errors.hpp"
#include "exitwell/geometry.hpp"
#include "exitwell/potential.hpp"

using namespace exitwell;

namespace {

PotentialSpec radial_spec(int k, double scale) {
  PotentialSpec sp;
  sp.kind = PotentialSpec::Kind::RadialPower;
  sp.power = k;
  sp.scale = scale;
  return sp;
}

PotentialSpec form_spec(double axx, double axy, double ayy) {
  PotentialSpec sp;
  sp.kind = PotentialSpec::Kind::QuadraticForm;
  sp.axx = axx;
  sp.axy = axy;
  sp.ayy = ayy;
  return sp;
}

PotentialSpec poly_spec(std::vector<Monomial> mons) {
  PotentialSpec sp;
  sp.kind = PotentialSpec::Kind::Polynomial;
  sp.monomials = std::move(mons);
  return sp;
}

DomainCurve unit_circle(int m = 128) {
  CurveSpec sp;
  sp.kind = CurveSpec::Kind::Circle;
  sp.radius = 1.0;
  return build_curve(sp, m);
}

}  // namespace

TEST_SUITE("potential") {

TEST_CASE("quadratic well values and derivatives") {
  const Potential p = build_potential(radial_spec(2, 1.0));
  CHECK(p.value({0.3, 0.4}) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(p.gradient({0.3, 0.4}).x == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(p.gradient({0.3, 0.4}).y == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(p.laplacian({0.7, -0.2}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(p.origin_degree() == 2);
  CHECK(p.is_radial());
  CHECK(p.radial_d2(0.42) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("quartic radial well") {
  const Potential p = build_potential(radial_spec(4, 4.0));  // V = |x|^4
  CHECK(p.value({1.0, 1.0}) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(p.origin_degree() == 4);
  CHECK(p.radial_d2(0.5) == doctest::Approx(12 * 0.25).epsilon(1e-12));
}

TEST_CASE("odd radial powers are rejected") {
  CHECK_THROWS_AS(build_potential(radial_spec(3, 1.0)), ConfigError);
  CHECK_THROWS_AS(build_potential(radial_spec(0, 1.0)), ConfigError);
}

TEST_CASE("anisotropic quadratic form") {
  const Potential p = build_potential(form_spec(1.0, 0.0, 2.0));
  CHECK(p.value({1.0, 0.0}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p.value({0.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(!p.is_radial());
}

TEST_CASE("indefinite quadratic forms are rejected") {
  CHECK_THROWS_AS(build_potential(form_spec(1.0, 1.5, 1.0)), AssumptionError);
  CHECK_THROWS_AS(build_potential(form_spec(-1.0, 0.0, 1.0)), AssumptionError);
}

TEST_CASE("wells must vanish to second order at the origin") {
  CHECK_THROWS_AS(build_potential(poly_spec({{0, 0, 1.0}, {2, 0, 1.0}})),
                  AssumptionError);
  CHECK_THROWS_AS(build_potential(poly_spec({{1, 0, 0.5}, {2, 0, 1.0}})),
                  AssumptionError);
}

TEST_CASE("sign-indefinite leading forms are rejected") {
  CHECK_THROWS_AS(build_potential(poly_spec({{2, 0, 1.0}, {0, 2, -1.0}})),
                  AssumptionError);
}

TEST_CASE("boundary traces of the radial benchmark") {
  const Potential p = build_potential(radial_spec(2, 1.0));
  const DomainCurve c = unit_circle();
  const BoundaryTraces tr = boundary_traces(p, c, 4);
  CHECK(tr.theta_min == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(tr.c2 == doctest::Approx(0.5).epsilon(1e-10));
  for (int q = 0; q < c.grid_size(); q += 5) {
    CHECK(tr.theta[0][q] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(tr.theta[1][q] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(tr.theta[2][q] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::fabs(tr.dtheta0_ds[q]) < 1e-10);
  }
}

TEST_CASE("boundary traces of the anisotropic benchmark") {
  const Potential p = build_potential(form_spec(1.0, 0.0, 2.0));
  const DomainCurve c = unit_circle();
  const BoundaryTraces tr = boundary_traces(p, c, 4);
  CHECK(tr.theta_min == doctest::Approx(0.5).epsilon(1e-10));
  const BoundarySamples& bs = c.samples();
  for (int q = 0; q < c.grid_size(); q += 5) {
    const double sn = bs.point[q].y;  // sin of the polar angle on the circle
    CHECK(tr.theta[0][q] ==
          doctest::Approx(0.5 * (1 + sn * sn)).epsilon(1e-10));
    CHECK(tr.theta[1][q] == doctest::Approx(-(1 + sn * sn)).epsilon(1e-10));
  }
}

TEST_CASE("flat inward slope on part of the boundary is rejected") {
  // V = r^2/2 - r^4/16 has V'(2) = 0, so theta_1 = 0 on the radius-2 circle
  const Potential p = build_potential(poly_spec({{2, 0, 0.5},
                                                 {0, 2, 0.5},
                                                 {4, 0, -1.0 / 16},
                                                 {2, 2, -2.0 / 16},
                                                 {0, 4, -1.0 / 16}}));
  CurveSpec sp;
  sp.kind = CurveSpec::Kind::Circle;
  sp.radius = 2.0;
  const DomainCurve c = build_curve(sp, 128);
  CHECK_THROWS_AS(boundary_traces(p, c, 3), AssumptionError);
}

TEST_CASE("assumption report on a healthy problem") {
  const Potential p = build_potential(form_spec(1.0, 0.0, 2.0));
  const DomainCurve c = unit_circle();
  const AssumptionReport rep = check_assumptions(p, c);
  CHECK(rep.all_ok());
  CHECK(rep.c1 > 0);
  CHECK(rep.c2 > 0);
  CHECK(rep.theta_min == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(rep.v_min_off_origin > 0);
}

TEST_CASE("assumption report flags a bad boundary without throwing") {
  const Potential p = build_potential(poly_spec({{2, 0, 0.5},
                                                 {0, 2, 0.5},
                                                 {4, 0, -1.0 / 16},
                                                 {2, 2, -2.0 / 16},
                                                 {0, 4, -1.0 / 16}}));
  CurveSpec sp;
  sp.kind = CurveSpec::Kind::Circle;
  sp.radius = 2.0;
  const DomainCurve c = build_curve(sp, 128);
  const AssumptionReport rep = check_assumptions(p, c);
  CHECK(!rep.all_ok());
  CHECK(!rep.ok_theta1);
}

}  // TEST_SUITE
