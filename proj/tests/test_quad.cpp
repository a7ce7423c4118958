#include <doctest.h>

#include <cmath>

#include "exitwell/layer.hpp"
#include "exitwell/quad.hpp"

using namespace exitwell;

namespace {

DomainCurve unit_circle(int m = 256) {
  CurveSpec sp;
  sp.kind = CurveSpec::Kind::Circle;
  sp.radius = 1.0;
  return build_curve(sp, m);
}

Potential make_radial() {
  PotentialSpec sp;
  sp.kind = PotentialSpec::Kind::RadialPower;
  sp.power = 2;
  sp.scale = 1.0;
  return build_potential(sp);
}

Potential make_aniso() {
  PotentialSpec sp;
  sp.kind = PotentialSpec::Kind::QuadraticForm;
  sp.axx = 1.0;
  sp.axy = 0.0;
  sp.ayy = 2.0;
  return build_potential(sp);
}

IntegralTable radial_table(int N, double eps, int m = 256) {
  const DomainCurve curve = unit_circle(m);
  const Potential pot = make_radial();
  const BoundaryTraces tr = boundary_traces(pot, curve, N + 2);
  const MetricTaylor mt = metric_taylor(curve, N + 2);
  const LayerOperatorData ops(mt, tr, curve.length());
  const auto phis = phi_sequence(N, ops);
  const auto us = u_sequence(N + 1, phis, ops);
  return build_integral_table(pot, curve, tr, phis, us, N, eps);
}

IntegralTable aniso_table(int N, double eps, int m = 256) {
  const DomainCurve curve = unit_circle(m);
  const Potential pot = make_aniso();
  const BoundaryTraces tr = boundary_traces(pot, curve, N + 2);
  const MetricTaylor mt = metric_taylor(curve, N + 2);
  const LayerOperatorData ops(mt, tr, curve.length());
  const auto phis = phi_sequence(N, ops);
  const auto us = u_sequence(N + 1, phis, ops);
  return build_integral_table(pot, curve, tr, phis, us, N, eps);
}

}  // namespace

TEST_SUITE("quad") {

TEST_CASE("radial reduced tables: exact integer sequences") {
  // on the radial benchmark the reduced boundary integrals are 2 pi times
  // fixed integers, independent of eps
  const IntegralTable t = radial_table(6, 0.5);
  const double two_pi = 2 * M_PI;
  const double mu_expect[] = {1, -2, -4, -24, -208, -2272, -29504};
  const double eta_expect[] = {1, 4, 32, 336, 4224, 61120, 996096};
  for (int j = 0; j <= 6; ++j) {
    CHECK(t.mu_reduced[j] / two_pi ==
          doctest::Approx(mu_expect[j]).epsilon(1e-9));
    CHECK(t.eta_reduced[j] / two_pi ==
          doctest::Approx(eta_expect[j]).epsilon(1e-9));
  }
}

TEST_CASE("full-scale boundary integrals at eps = 0.5") {
  const IntegralTable t = radial_table(2, 0.5);
  const double mu0 = 2 * M_PI * std::exp(-2.0);
  CHECK(t.mu[0].value() == doctest::Approx(mu0).epsilon(1e-10));
  CHECK(t.mu[1].value() == doctest::Approx(-2 * mu0).epsilon(1e-10));
  CHECK(t.eta[0].value() == doctest::Approx(mu0).epsilon(1e-10));
  CHECK(t.log_scale == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("volume integral of the radial benchmark") {
  const DomainCurve curve = unit_circle();
  const Potential pot = make_radial();
  for (double eps : {0.5, 0.35}) {
    const double expect =
        2 * M_PI * eps * eps * (1.0 - std::exp(-1.0 / (2 * eps * eps)));
    CHECK(volume_integral(pot, curve, eps) ==
          doctest::Approx(expect).epsilon(1e-8));
  }
}

TEST_CASE("leading-order constants") {
  {
    const auto [an, an1] = alpha_leading(make_radial());
    CHECK(an == doctest::Approx(2 * M_PI).epsilon(1e-10));
    CHECK(std::fabs(an1) < 1e-10);
  }
  {
    const auto [an, an1] = alpha_leading(make_aniso());
    CHECK(an == doctest::Approx(M_PI * std::sqrt(2.0)).epsilon(1e-10));
    CHECK(std::fabs(an1) < 1e-10);
  }
  {
    // quartic well |x|^4: Gamma(1/2)/4 times the circle integral 2 pi
    PotentialSpec sp;
    sp.kind = PotentialSpec::Kind::RadialPower;
    sp.power = 4;
    sp.scale = 4.0;
    const auto [an, an1] = alpha_leading(build_potential(sp));
    CHECK(an == doctest::Approx(M_PI * std::sqrt(M_PI) / 2).epsilon(1e-9));
    CHECK(std::fabs(an1) < 1e-9);
  }
}

TEST_CASE("next-order constant vanishes by parity") {
  // the degree-(k+1) correction is odd whenever the leading form is even, so
  // its integral against e^{-V0} cancels; a genuine cubic part exercises the
  // correction quadrature without changing the answer
  PotentialSpec sp;
  sp.kind = PotentialSpec::Kind::Polynomial;
  sp.monomials = {{2, 0, 0.5}, {0, 2, 0.5}, {3, 0, 0.3}, {1, 2, -0.2}};
  const auto [an, an1] = alpha_leading(build_potential(sp));
  CHECK(an == doctest::Approx(2 * M_PI).epsilon(1e-10));
  CHECK(std::fabs(an1) < 1e-9);
}

TEST_CASE("anisotropic benchmark table at eps = 0.4") {
  const IntegralTable t = aniso_table(2, 0.4);
  CHECK(t.volume == doctest::Approx(0.697168116985).epsilon(1e-9));
  CHECK(t.mu_reduced[0] == doctest::Approx(2.689992630866).epsilon(1e-9));
  CHECK(t.mu_reduced[1] == doctest::Approx(-4.775669014319).epsilon(1e-9));
  CHECK(t.mu_reduced[2] == doctest::Approx(-7.752375436909).epsilon(1e-9));
  CHECK(t.eta_reduced[0] == doctest::Approx(1.947842053223).epsilon(1e-9));
  CHECK(t.eta_reduced[1] == doctest::Approx(7.820302597343).epsilon(1e-9));
  CHECK(t.eta_reduced[2] == doctest::Approx(57.684487940217).epsilon(1e-9));
}

TEST_CASE("boundary concentration diagnostic") {
  const DomainCurve curve = unit_circle();
  {
    // constant boundary trace: the diagnostic equals mu_0 exactly
    const IntegralTable t = radial_table(0, 0.5);
    const Potential pot = make_radial();
    const BoundaryTraces tr = boundary_traces(pot, curve, 2);
    const LaplaceDiagnostic d = laplace_leading_mu(tr, curve.length(), 0.5);
    REQUIRE(d.available);
    CHECK((d.value / t.mu[0]).value() == doctest::Approx(1.0).epsilon(1e-10));
  }
  {
    // varying trace: saddle-point value approaches mu_0 from below as eps
    // shrinks; pinned at two eps values
    const Potential pot = make_aniso();
    const BoundaryTraces tr = boundary_traces(pot, curve, 2);
    const IntegralTable t5 = aniso_table(0, 0.5);
    const IntegralTable t3 = aniso_table(0, 0.3);
    const LaplaceDiagnostic d5 = laplace_leading_mu(tr, curve.length(), 0.5);
    const LaplaceDiagnostic d3 = laplace_leading_mu(tr, curve.length(), 0.3);
    REQUIRE(d5.available);
    REQUIRE(d3.available);
    CHECK((d5.value / t5.mu[0]).value() ==
          doctest::Approx(0.670847).epsilon(1e-5));
    CHECK((d3.value / t3.mu[0]).value() ==
          doctest::Approx(0.853750).epsilon(1e-5));
  }
  {
    // quartic-flat minimum of the trace: the diagnostic declines
    PotentialSpec sp;
    sp.kind = PotentialSpec::Kind::Polynomial;
    sp.monomials = {{2, 0, 0.5}, {0, 2, 0.5}, {0, 4, 1.0}};
    const Potential pot = build_potential(sp);
    const BoundaryTraces tr = boundary_traces(pot, curve, 2);
    const LaplaceDiagnostic d = laplace_leading_mu(tr, curve.length(), 0.4);
    CHECK(!d.available);
    CHECK(!d.note.empty());
  }
}

}  // TEST_SUITE
