#include <doctest.h>

#include <cmath>

#include "exitwell/errors.hpp"
#include "exitwell/validate.hpp"

using namespace exitwell;

namespace {

Potential make_radial() {
  PotentialSpec sp;
  sp.kind = PotentialSpec::Kind::RadialPower;
  sp.power = 2;
  sp.scale = 1.0;
  return build_potential(sp);
}

DomainCurve unit_circle(int m = 256) {
  CurveSpec sp;
  sp.kind = CurveSpec::Kind::Circle;
  sp.radius = 1.0;
  return build_curve(sp, m);
}

}  // namespace

TEST_SUITE("validate") {

TEST_CASE("closed-form center exit time on the unit disk") {
  // 1/2 * integral of expm1(t)/t over (0, 1/2eps^2), checked against an
  // independent high-precision evaluation
  CHECK(exact_disk_quadratic_u0(0.5) == doctest::Approx(1.84193575527).epsilon(1e-11));
  CHECK(exact_disk_quadratic_u0(0.4) == doctest::Approx(4.5450962411).epsilon(1e-10));
  CHECK(exact_disk_quadratic_u0(0.35) == doctest::Approx(9.39815320092).epsilon(1e-10));
  CHECK(exact_disk_quadratic_u0(0.3) == doctest::Approx(29.3511067602).epsilon(1e-10));
  CHECK(exact_disk_quadratic_u0(0.25) == doctest::Approx(218.861621164).epsilon(1e-10));
  // u(R) = 0, u decreasing in r, u(0) consistent with the general form
  CHECK(exact_disk_quadratic_u(1.0, 1.0, 0.4) == 0.0);
  CHECK(exact_disk_quadratic_u(0.0, 1.0, 0.4) ==
        doctest::Approx(exact_disk_quadratic_u0(0.4)).epsilon(1e-14));
  double prev = exact_disk_quadratic_u(0.0, 1.0, 0.4);
  for (int i = 1; i <= 10; ++i) {
    const double cur = exact_disk_quadratic_u(0.1 * i, 1.0, 0.4);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("finite differences reproduce the closed form") {
  const Potential pot = make_radial();
  // the thinner layer at eps=0.35 loses about a decade of accuracy on the
  // same graded grid
  const double cases[][2] = {{0.5, 1e-7}, {0.35, 1e-6}};
  for (const auto& cs : cases) {
    const double eps = cs[0], tol = cs[1];
    const RadialBvpResult r = radial_bvp(pot, 1.0, eps, 4096);
    const double exact = exact_disk_quadratic_u0(eps);
    CHECK(std::fabs(r.u0 - exact) / exact < tol);
    // spot-check the profile away from the center as well
    const int mid = (int)r.r.size() / 2;
    const double em = exact_disk_quadratic_u(r.r[mid], 1.0, eps);
    CHECK(std::fabs(r.u[mid] - em) < tol * exact);
  }
}

TEST_CASE("under-resolved boundary layers are rejected up front") {
  const Potential pot = make_radial();
  CHECK_THROWS_AS(radial_bvp(pot, 1.0, 0.1, 64), ConfigError);
  CHECK_THROWS_AS(radial_bvp(pot, 1.0, 0.3, 16), ConfigError);
  CHECK_THROWS_AS(radial_bvp(pot, 1.0, 0.5, 8), ConfigError);
  PotentialSpec sp;
  sp.kind = PotentialSpec::Kind::QuadraticForm;
  sp.axx = 1.0;
  sp.ayy = 2.0;
  CHECK_THROWS_AS(radial_bvp(build_potential(sp), 1.0, 0.5, 1024), ConfigError);
}

TEST_CASE("large-noise limit matches the pure Poisson problem") {
  // for eps -> infinity the drift is negligible and u -> (R^2 - r^2)/(4 eps^2)
  const RadialBvpResult r = radial_bvp(make_radial(), 1.0, 100.0, 512);
  CHECK(r.u0 == doctest::Approx(1.0 / 4e4).epsilon(1e-3));
}

TEST_CASE("discrete principal eigenvalue at a pinned resolution") {
  const RadialEigenResult e = radial_eigen(make_radial(), 1.0, 0.5, 4096);
  CHECK(e.lambda == doctest::Approx(0.658956883687).epsilon(1e-9));
  CHECK(e.iterations > 0);
  // ground state is positive after the fixed sign convention
  for (double v : e.v) CHECK(v > 0);
}

TEST_CASE("eigenvalue discretization error shrinks at second order") {
  const Potential pot = make_radial();
  const double l1 = radial_eigen(pot, 1.0, 0.5, 1024).lambda;
  const double l2 = radial_eigen(pot, 1.0, 0.5, 2048).lambda;
  const double l4 = radial_eigen(pot, 1.0, 0.5, 4096).lambda;
  const double linf = l4 + (l4 - l2) / 3.0;  // h^2 extrapolation
  const double ratio = (l1 - linf) / (l2 - linf);
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("eigensolver input validation") {
  CHECK_THROWS_AS(radial_eigen(make_radial(), 1.0, 0.5, 8), ConfigError);
  PotentialSpec sp;
  sp.kind = PotentialSpec::Kind::QuadraticForm;
  sp.axx = 1.0;
  sp.ayy = 3.0;
  CHECK_THROWS_AS(radial_eigen(build_potential(sp), 1.0, 0.5, 256), ConfigError);
}

TEST_CASE("path sampling is bit-identical across thread counts") {
  const Potential pot = make_radial();
  const DomainCurve curve = unit_circle();
  McSettings st;
  st.n_paths = 400;
  st.dt = 1e-3;
  st.seed = 11;
  st.threads = 2;
  const McResult a = mc_exit(pot, curve, 0.5, {0, 0}, st);
  st.threads = 5;
  const McResult b = mc_exit(pot, curve, 0.5, {0, 0}, st);
  CHECK(a.mean == b.mean);
  CHECK(a.stderr_ == b.stderr_);
  CHECK(a.total_steps == b.total_steps);
  REQUIRE(a.angle_histogram.size() == b.angle_histogram.size());
  for (std::size_t i = 0; i < a.angle_histogram.size(); ++i)
    CHECK(a.angle_histogram[i] == b.angle_histogram[i]);
  long long total = 0;
  for (long long c : a.angle_histogram) total += c;
  CHECK(total == st.n_paths);
  CHECK(!a.budget_exceeded);
  // a different seed gives a genuinely different sample
  st.seed = 12;
  const McResult c = mc_exit(pot, curve, 0.5, {0, 0}, st);
  CHECK(c.mean != a.mean);
}

TEST_CASE("sample mean lands near the known answer") {
  McSettings st;
  st.n_paths = 4000;
  st.dt = 1e-3;
  st.seed = 1;
  const McResult r = mc_exit(make_radial(), unit_circle(), 0.5, {0, 0}, st);
  const double exact = exact_disk_quadratic_u0(0.5);
  // time discretization biases the mean upward by O(sqrt(dt)); allow for it
  CHECK(std::fabs(r.mean - exact) < 4 * r.stderr_ + 5 * std::sqrt(st.dt));
  CHECK(r.stderr_ > 0);
  CHECK(r.stderr_ < 0.1);
}

TEST_CASE("standard error scales as one over sqrt n") {
  McSettings st;
  st.dt = 2e-3;
  st.seed = 3;
  st.n_paths = 500;
  const McResult small = mc_exit(make_radial(), unit_circle(), 0.5, {0, 0}, st);
  st.n_paths = 2000;
  const McResult big = mc_exit(make_radial(), unit_circle(), 0.5, {0, 0}, st);
  const double ratio = small.stderr_ / big.stderr_;
  CHECK(ratio > 1.6);
  CHECK(ratio < 2.4);
}

TEST_CASE("step budget is enforced and reported") {
  McSettings st;
  st.n_paths = 50;
  st.dt = 1e-3;
  st.max_steps_per_path = 10;
  const McResult r = mc_exit(make_radial(), unit_circle(), 0.25, {0, 0}, st);
  CHECK(r.budget_exceeded);
  // every path is cut off at the cap, so the mean is exactly cap * dt
  CHECK(r.mean == doctest::Approx(10 * st.dt).epsilon(1e-15));
}

TEST_CASE("start point validation") {
  McSettings st;
  st.n_paths = 10;
  CHECK_THROWS_AS(mc_exit(make_radial(), unit_circle(), 0.5, {2.0, 0.0}, st),
                  ConfigError);
}

TEST_CASE("exit angles of the symmetric problem are uniform") {
  McSettings st;
  st.n_paths = 10000;
  st.dt = 2e-4;
  st.seed = 1;
  st.angle_bins = 36;
  const McResult r = mc_exit(make_radial(), unit_circle(), 0.5, {0, 0}, st);
  const double expect = (double)st.n_paths / st.angle_bins;
  double chi2 = 0;
  for (long long c : r.angle_histogram) {
    const double d = c - expect;
    chi2 += d * d / expect;
  }
  // central 99% band of chi-squared with 35 degrees of freedom
  CHECK(chi2 > 17.1917);
  CHECK(chi2 < 60.2748);
}

}  // TEST_SUITE
