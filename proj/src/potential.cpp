#include "exitwell/potential.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "exitwell/errors.hpp"

namespace exitwell {

namespace {

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// merge duplicate (i, j) entries and drop zeros
std::vector<Monomial> normalize(const std::vector<Monomial>& in) {
  std::map<std::pair<int, int>, double> acc;
  for (const auto& mo : in) {
    if (mo.i < 0 || mo.j < 0)
      throw ConfigError("potential: negative monomial exponent");
    acc[{mo.i, mo.j}] += mo.c;
  }
  std::vector<Monomial> out;
  for (const auto& [ij, c] : acc)
    if (c != 0.0) out.push_back({ij.first, ij.second, c});
  return out;
}

}  // namespace

double Potential::value(const Vec2& p) const {
  double v = 0;
  for (const auto& mo : mono_) v += mo.c * ipow(p.x, mo.i) * ipow(p.y, mo.j);
  return v;
}

Vec2 Potential::gradient(const Vec2& p) const {
  Vec2 g;
  for (const auto& mo : mono_) {
    if (mo.i > 0) g.x += mo.c * mo.i * ipow(p.x, mo.i - 1) * ipow(p.y, mo.j);
    if (mo.j > 0) g.y += mo.c * mo.j * ipow(p.x, mo.i) * ipow(p.y, mo.j - 1);
  }
  return g;
}

double Potential::laplacian(const Vec2& p) const {
  double l = 0;
  for (const auto& mo : mono_) {
    if (mo.i > 1)
      l += mo.c * mo.i * (mo.i - 1) * ipow(p.x, mo.i - 2) * ipow(p.y, mo.j);
    if (mo.j > 1)
      l += mo.c * mo.j * (mo.j - 1) * ipow(p.x, mo.i) * ipow(p.y, mo.j - 2);
  }
  return l;
}

double Potential::radial_d2(double r) const {
  // second derivative along the x-axis; equals v''(r) for radial V
  double v = 0;
  for (const auto& mo : mono_)
    if (mo.j == 0 && mo.i > 1)
      v += mo.c * mo.i * (mo.i - 1) * ipow(r, mo.i - 2);
  return v;
}

std::vector<Monomial> Potential::origin_form(int degree) const {
  std::vector<Monomial> out;
  for (const auto& mo : mono_)
    if (mo.i + mo.j == degree) out.push_back(mo);
  return out;
}

Potential build_potential(const PotentialSpec& spec) {
  Potential pot;
  switch (spec.kind) {
    case PotentialSpec::Kind::RadialPower: {
      const int k = spec.power;
      if (k < 2 || k % 2 != 0)
        throw ConfigError(
            "radial_power: exponent must be even and >= 2 (odd powers of |x| "
            "are not smooth at the origin)");
      if (!(spec.scale > 0)) throw ConfigError("radial_power: scale must be > 0");
      // scale * (x^2 + y^2)^(k/2) / k
      const int h = k / 2;
      for (int i = 0; i <= h; ++i)
        pot.mono_.push_back({2 * (h - i), 2 * i, spec.scale * binom(h, i) / k});
      break;
    }
    case PotentialSpec::Kind::QuadraticForm: {
      if (!(spec.axx > 0 && spec.axx * spec.ayy - spec.axy * spec.axy > 0))
        throw AssumptionError(
            "quadratic_form: matrix must be symmetric positive definite");
      pot.mono_.push_back({2, 0, spec.axx / 2});
      pot.mono_.push_back({1, 1, spec.axy});
      pot.mono_.push_back({0, 2, spec.ayy / 2});
      break;
    }
    case PotentialSpec::Kind::Polynomial: {
      pot.mono_ = spec.monomials;
      break;
    }
  }
  pot.mono_ = normalize(pot.mono_);
  if (pot.mono_.empty()) throw ConfigError("potential: no nonzero terms");

  // well at the origin: no constant or linear terms allowed
  for (const auto& mo : pot.mono_)
    if (mo.i + mo.j < 2)
      throw AssumptionError(
          "potential must satisfy V(0) = 0 and grad V(0) = 0 (found a "
          "constant or linear term)");

  int k = 1 << 20;
  for (const auto& mo : pot.mono_) k = std::min(k, mo.i + mo.j);
  pot.k_ = k;

  // leading homogeneous form must be positive away from the origin
  {
    double hmin = 1e300;
    for (int a = 0; a < 720; ++a) {
      const double phi = 2 * M_PI * a / 720;
      const Vec2 u{std::cos(phi), std::sin(phi)};
      double h = 0;
      for (const auto& mo : pot.mono_)
        if (mo.i + mo.j == k) h += mo.c * ipow(u.x, mo.i) * ipow(u.y, mo.j);
      hmin = std::min(hmin, h);
    }
    if (!(hmin > 0))
      throw AssumptionError(
          "potential: leading homogeneous part is not positive away from the "
          "origin (not a single well)");
  }

  // radial detection: angular invariance at a few radii
  {
    bool radial = true;
    for (double r : {0.3, 0.7, 1.1}) {
      const double ref = pot.value({r, 0.0});
      for (int a = 1; a < 16 && radial; ++a) {
        const double phi = 2 * M_PI * a / 16;
        if (std::fabs(pot.value({r * std::cos(phi), r * std::sin(phi)}) - ref) >
            1e-12 * std::max(1.0, std::fabs(ref)))
          radial = false;
      }
    }
    pot.radial_ = radial;
  }
  return pot;
}

namespace {

// exact expansion of each monomial along the normal ray:
// (px + tau nx)^i (py + tau ny)^j, collecting powers of tau
std::vector<std::vector<double>> trace_arrays(const Potential& pot,
                                              const DomainCurve& curve,
                                              int jmax) {
  const auto& bs = curve.samples();
  const int m = static_cast<int>(bs.s.size());
  std::vector<std::vector<double>> theta(jmax + 1,
                                         std::vector<double>(m, 0.0));
  for (int q = 0; q < m; ++q) {
    const Vec2 p = bs.point[q], nu = bs.normal[q];
    for (const auto& mo : pot.monomials()) {
      // xpow[a] = C(i,a) px^(i-a) nx^a
      std::vector<double> xpow(mo.i + 1), ypow(mo.j + 1);
      for (int a = 0; a <= mo.i; ++a) {
        double b = 1.0;
        for (int t = 1; t <= a; ++t) b = b * (mo.i - a + t) / t;
        xpow[a] = b * ipow(p.x, mo.i - a) * ipow(nu.x, a);
      }
      for (int b = 0; b <= mo.j; ++b) {
        double bb = 1.0;
        for (int t = 1; t <= b; ++t) bb = bb * (mo.j - b + t) / t;
        ypow[b] = bb * ipow(p.y, mo.j - b) * ipow(nu.y, b);
      }
      for (int a = 0; a <= mo.i; ++a)
        for (int b = 0; b <= mo.j; ++b) {
          const int d = a + b;
          if (d <= jmax) theta[d][q] += mo.c * xpow[a] * ypow[b];
        }
    }
  }
  return theta;
}

double collar_c2(const Potential& pot, const DomainCurve& curve) {
  const auto& bs = curve.samples();
  const int m = static_cast<int>(bs.s.size());
  const int nl = 33;
  double c2 = 1e300;
  for (int q = 0; q < m; ++q) {
    for (int l = 0; l <= nl; ++l) {
      const double tau = curve.collar_depth() * l / nl;
      const Vec2 x = bs.point[q] + bs.normal[q] * tau;
      c2 = std::min(c2, -pot.gradient(x).dot(bs.normal[q]));
    }
  }
  return c2;
}

}  // namespace

BoundaryTraces boundary_traces(const Potential& pot, const DomainCurve& curve,
                               int jmax) {
  BoundaryTraces tr;
  tr.theta = trace_arrays(pot, curve, jmax);
  tr.theta_min = *std::min_element(tr.theta[0].begin(), tr.theta[0].end());
  if (!(tr.theta_min > 0))
    throw AssumptionError(
        "assumption failure: boundary trace of V must be strictly positive "
        "(theta_min = " +
        std::to_string(tr.theta_min) + ")");

  const double th1_max = *std::max_element(tr.theta[1].begin(), tr.theta[1].end());
  if (!(th1_max < 0))
    throw AssumptionError(
        "assumption failure: inward normal derivative of V must be strictly "
        "negative on the whole boundary (max theta1 = " +
        std::to_string(th1_max) + ")");

  // measured c2: minimum of -dV/dtau over a collar sample grid
  tr.c2 = collar_c2(pot, curve);
  if (!(tr.c2 > 0))
    throw AssumptionError(
        "assumption failure: V must decrease strictly toward the boundary "
        "across the whole collar (measured bound " +
        std::to_string(tr.c2) + ")");

  tr.dtheta0_ds = spectral_derivative(tr.theta[0], curve.length());
  return tr;
}

AssumptionReport check_assumptions(const Potential& pot,
                                   const DomainCurve& curve, double rho1) {
  AssumptionReport rep;
  rep.rho1 = rho1;

  rep.ok_origin = true;  // enforced at build time (no low-order terms)
  rep.ok_leading_form = true;

  // sample the domain on polar rays (the curve is star-shaped by construction)
  const int na = 128, nr = 64;
  double c1 = 1e300, vmin = 1e300;
  for (int a = 0; a < na; ++a) {
    const double phi = 2 * M_PI * a / na;
    const double R = curve.radius_at_angle(phi) * (1 - 1e-9);
    for (int ir = 1; ir <= nr; ++ir) {
      const double r = R * ir / nr;
      const Vec2 x{r * std::cos(phi), r * std::sin(phi)};
      if (r >= rho1) c1 = std::min(c1, pot.gradient(x).norm());
      if (r >= 1e-3) vmin = std::min(vmin, pot.value(x));
    }
  }
  rep.c1 = c1;
  rep.v_min_off_origin = vmin;
  rep.ok_gradient = c1 > 0;
  rep.ok_positive = vmin > 0;

  const auto theta = trace_arrays(pot, curve, 1);
  rep.theta_min = *std::min_element(theta[0].begin(), theta[0].end());
  rep.ok_theta_min = rep.theta_min > 0;
  rep.ok_theta1 = *std::max_element(theta[1].begin(), theta[1].end()) < 0;
  rep.c2 = collar_c2(pot, curve);
  rep.ok_theta1 = rep.ok_theta1 && rep.c2 > 0;
  return rep;
}

}  // namespace exitwell
