#include "exitwell/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "exitwell/errors.hpp"

namespace exitwell {

double Vec2::norm() const { return std::sqrt(x * x + y * y); }

namespace {

bool power_of_two(int m) { return m >= 2 && (m & (m - 1)) == 0; }

// Native parameterization with analytic derivatives (t runs over [0, 2pi),
// counterclockwise for all supported kinds).
struct ParamCurve {
  std::function<Vec2(double)> pos, d1, d2;
};

ParamCurve make_param_curve(const CurveSpec& spec) {
  switch (spec.kind) {
    case CurveSpec::Kind::Circle: {
      const double R = spec.radius;
      if (!(R > 0)) throw ConfigError("circle: radius must be positive");
      return {[R](double t) { return Vec2{R * std::cos(t), R * std::sin(t)}; },
              [R](double t) { return Vec2{-R * std::sin(t), R * std::cos(t)}; },
              [R](double t) {
                return Vec2{-R * std::cos(t), -R * std::sin(t)};
              }};
    }
    case CurveSpec::Kind::Ellipse: {
      const double a = spec.a, b = spec.b;
      if (!(a > 0 && b > 0))
        throw ConfigError("ellipse: semi-axes must be positive");
      return {[a, b](double t) {
                return Vec2{a * std::cos(t), b * std::sin(t)};
              },
              [a, b](double t) {
                return Vec2{-a * std::sin(t), b * std::cos(t)};
              },
              [a, b](double t) {
                return Vec2{-a * std::cos(t), -b * std::sin(t)};
              }};
    }
    case CurveSpec::Kind::FourierStar: {
      const double r0 = spec.r0;
      const auto ac = spec.cos_coeffs, as = spec.sin_coeffs;
      if (!(r0 > 0)) throw ConfigError("fourier_star: r0 must be positive");
      auto radius = [r0, ac, as](double t, int deriv) {
        double v = (deriv == 0) ? r0 : 0.0;
        for (size_t i = 0; i < std::max(ac.size(), as.size()); ++i) {
          const double k = static_cast<double>(i + 1);
          const double c = i < ac.size() ? ac[i] : 0.0;
          const double s = i < as.size() ? as[i] : 0.0;
          switch (deriv) {
            case 0: v += c * std::cos(k * t) + s * std::sin(k * t); break;
            case 1: v += k * (-c * std::sin(k * t) + s * std::cos(k * t)); break;
            case 2: v += k * k * (-c * std::cos(k * t) - s * std::sin(k * t)); break;
          }
        }
        return v;
      };
      // a signed radius crossing zero means the "curve" passes through the
      // origin and self-intersects; |x(t)| alone cannot see the sign, so
      // check it here
      for (int j = 0; j < 4096; ++j)
        if (!(radius(2 * M_PI * j / 4096, 0) > 0))
          throw ConfigError(
              "fourier_star: radius must stay positive (the curve is not "
              "star-shaped around the origin)");
      return {[radius](double t) {
                const double r = radius(t, 0);
                return Vec2{r * std::cos(t), r * std::sin(t)};
              },
              [radius](double t) {
                const double r = radius(t, 0), dr = radius(t, 1);
                return Vec2{dr * std::cos(t) - r * std::sin(t),
                            dr * std::sin(t) + r * std::cos(t)};
              },
              [radius](double t) {
                const double r = radius(t, 0), dr = radius(t, 1),
                             ddr = radius(t, 2);
                return Vec2{ddr * std::cos(t) - 2 * dr * std::sin(t) -
                                r * std::cos(t),
                            ddr * std::sin(t) + 2 * dr * std::cos(t) -
                                r * std::sin(t)};
              }};
    }
  }
  throw ConfigError("unknown curve kind");
}

double curvature_param(const ParamCurve& c, double t) {
  const Vec2 d1 = c.d1(t), d2 = c.d2(t);
  const double sp = d1.norm();
  return d1.cross(d2) / (sp * sp * sp);
}

}  // namespace

Vec2 DomainCurve::point_at(double s) const {
  const TrigBasis bx = ix_.basis(s);
  return {ix_.eval(bx), iy_.eval(bx)};
}

Vec2 DomainCurve::tangent_at(double s) const {
  const TrigBasis bx = ix_.basis(s);
  Vec2 d{ix_.derivative(bx), iy_.derivative(bx)};
  const double n = d.norm();
  return {d.x / n, d.y / n};
}

Vec2 DomainCurve::normal_at(double s) const {
  const Vec2 t = tangent_at(s);
  return {-t.y, t.x};  // +90 degree rotation points inward for CCW curves
}

double DomainCurve::curvature_at(double s) const { return ikappa_.eval(s); }

Vec2 DomainCurve::collar_point(double s, double tau) const {
  if (tau < -1e-12 || tau > tau0_ + 1e-12)
    throw NumericalError("collar_point: tau outside [0, collar_depth]");
  const TrigBasis bx = ix_.basis(s);
  Vec2 p{ix_.eval(bx), iy_.eval(bx)};
  Vec2 d{ix_.derivative(bx), iy_.derivative(bx)};
  const double n = d.norm();
  const Vec2 nu{-d.y / n, d.x / n};
  return p + nu * tau;
}

CollarCoords DomainCurve::locate(const Vec2& p) const {
  const int m = grid_size();
  const double L = samples_.length;
  const double h = L / m;

  auto newton_from = [&](double s0, double* out_s, Vec2* out_x,
                         Vec2* out_nu) -> bool {
    double s = s0;
    for (int it = 0; it < 50; ++it) {
      const TrigBasis bx = ix_.basis(s);
      const Vec2 x{ix_.eval(bx), iy_.eval(bx)};
      Vec2 d{ix_.derivative(bx), iy_.derivative(bx)};
      const Vec2 r = p - x;
      const double f = r.dot(d);
      const double kap = ikappa_.eval(s);
      const double dn = d.norm();
      const Vec2 nu{-d.y / dn, d.x / dn};
      // arc length: x'' = kappa * nu
      const double fp = -d.dot(d) + r.dot(nu) * kap;
      if (fp == 0.0) return false;
      double step = f / fp;
      if (std::fabs(step) > 4 * h) step = (step > 0 ? 4 * h : -4 * h);
      s -= step;
      s = std::fmod(s, L);
      if (s < 0) s += L;
      if (std::fabs(step) < 1e-13 * L) {
        *out_s = s;
        *out_x = Vec2{ix_.eval(ix_.basis(s)), iy_.eval(iy_.basis(s))};
        const TrigBasis b2 = ix_.basis(s);
        Vec2 d2{ix_.derivative(b2), iy_.derivative(b2)};
        const double dn2 = d2.norm();
        *out_nu = Vec2{-d2.y / dn2, d2.x / dn2};
        return true;
      }
    }
    return false;
  };

  // seed from the full sample grid
  int best = 0;
  double bestd = (p - samples_.point[0]).norm2();
  for (int q = 1; q < m; ++q) {
    const double d = (p - samples_.point[q]).norm2();
    if (d < bestd) {
      bestd = d;
      best = q;
    }
  }

  double s_star;
  Vec2 x_star, nu_star;
  if (!newton_from(samples_.s[best], &s_star, &x_star, &nu_star)) {
    // dense fallback: 16x finer scan, then Newton again; if even that fails,
    // accept the dense minimizer (slow path, never an error)
    const int md = 16 * m;
    int db = 0;
    double dbest = 1e300;
    for (int q = 0; q < md; ++q) {
      const double s = q * L / md;
      const Vec2 x = point_at(s);
      const double d = (p - x).norm2();
      if (d < dbest) {
        dbest = d;
        db = q;
      }
    }
    if (!newton_from(db * L / md, &s_star, &x_star, &nu_star)) {
      s_star = db * L / md;
      x_star = point_at(s_star);
      nu_star = normal_at(s_star);
    }
  }

  CollarCoords cc;
  cc.s = s_star;
  cc.tau = (p - x_star).dot(nu_star);
  if (cc.tau < 0)
    cc.status = CollarStatus::Exterior;
  else if (cc.tau > tau0_)
    cc.status = CollarStatus::DeepInterior;
  else
    cc.status = CollarStatus::Inside;
  return cc;
}

double DomainCurve::radius_at_angle(double phi) const {
  const int m = grid_size();
  const double L = samples_.length;
  const double base = angle_[0];
  // normalize phi into [angle_[0], angle_[0] + 2pi)
  double ph = std::fmod(phi - base, 2 * M_PI);
  if (ph < 0) ph += 2 * M_PI;
  ph += base;
  // bracket on the sample table (angle_ is strictly increasing)
  int lo = 0, hi = m;  // angle_[m] interpreted as angle_[0] + 2pi
  auto ang = [&](int q) {
    return q < m ? angle_[q] : angle_[0] + 2 * M_PI;
  };
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (ang(mid) <= ph)
      lo = mid;
    else
      hi = mid;
  }
  const double frac =
      (ph - ang(lo)) / std::max(ang(lo + 1) - ang(lo), 1e-300);
  double s = (lo + frac) * (L / m);
  // Newton on angle(x(s)) = ph; d(angle)/ds = (x cross x') / |x|^2
  for (int it = 0; it < 30; ++it) {
    const TrigBasis bx = ix_.basis(s);
    const Vec2 x{ix_.eval(bx), iy_.eval(bx)};
    const Vec2 d{ix_.derivative(bx), iy_.derivative(bx)};
    double a = std::atan2(x.y, x.x);
    // choose the representative of a closest to ph
    a += 2 * M_PI * std::round((ph - a) / (2 * M_PI));
    const double g = a - ph;
    const double gp = x.cross(d) / x.norm2();
    const double step = g / gp;
    s -= step;
    if (std::fabs(step) < 1e-14 * L) break;
  }
  return point_at(s).norm();
}

DomainCurve build_curve(const CurveSpec& spec, int grid_size,
                        double collar_cap) {
  if (!power_of_two(grid_size) || grid_size < 16)
    throw ConfigError("grid_size must be a power of two >= 16 (got " +
                      std::to_string(grid_size) + ")");
  if (!(collar_cap > 0)) throw ConfigError("collar cap must be positive");

  const ParamCurve pc = make_param_curve(spec);

  // dense sampling of the native parameter for the arc-length map
  const int md = std::max(4096, 8 * grid_size);
  std::vector<double> speed(md);
  double rmin = 1e300, rmax = 0;
  double area2 = 0;  // twice the enclosed area
  for (int j = 0; j < md; ++j) {
    const double t = 2 * M_PI * j / md;
    const Vec2 x = pc.pos(t), d = pc.d1(t);
    speed[j] = d.norm();
    if (!(speed[j] > 0))
      throw ConfigError("curve is not regular (|x'(t)| = 0 somewhere)");
    if (x.cross(d) <= 0)
      throw ConfigError(
          "curve must be star-shaped around the origin (counterclockwise, "
          "origin enclosed)");
    rmin = std::min(rmin, x.norm());
    rmax = std::max(rmax, x.norm());
    area2 += x.cross(d) * (2 * M_PI / md);
  }
  if (!(rmin > 0)) throw ConfigError("curve passes through the origin");

  // cumulative arc length: mean part + periodic antiderivative of the rest
  auto spec_fft = real_fft(speed);
  const double mean_speed = spec_fft[0].real() / md;
  {
    spec_fft[0] = 0.0;
    for (int k = 1; k < static_cast<int>(spec_fft.size()); ++k) {
      if (2 * k == md)
        spec_fft[k] = 0.0;  // Nyquist dropped in the antiderivative
      else
        spec_fft[k] /= std::complex<double>(0.0, static_cast<double>(k));
    }
  }
  std::vector<double> osc = real_ifft(spec_fft, md);
  const double osc0 = osc[0];
  const double total_len = mean_speed * 2 * M_PI;
  TrigInterp osc_interp(osc, 2 * M_PI);

  auto arclen = [&](double t) {
    return mean_speed * t + osc_interp.eval(t) - osc0;
  };
  auto speed_at = [&](double t) { return pc.d1(t).norm(); };

  // invert the (strictly increasing) arc-length map at the uniform targets
  const int m = grid_size;
  BoundarySamples bs;
  bs.length = total_len;
  bs.s.resize(m);
  bs.point.resize(m);
  bs.tangent.resize(m);
  bs.normal.resize(m);
  bs.kappa.resize(m);
  std::vector<double> px(m), py(m), kap(m);
  double kappa_max_abs = 0;
  for (int q = 0; q < m; ++q) {
    const double target = q * total_len / m;
    double t = 2 * M_PI * q / m;  // decent initial guess
    for (int it = 0; it < 60; ++it) {
      const double step = (arclen(t) - target) / speed_at(t);
      t -= step;
      if (std::fabs(step) < 1e-15 * 2 * M_PI) break;
    }
    const Vec2 x = pc.pos(t), d = pc.d1(t);
    const double sp = d.norm();
    bs.s[q] = target;
    bs.point[q] = x;
    bs.tangent[q] = {d.x / sp, d.y / sp};
    bs.normal[q] = {-d.y / sp, d.x / sp};
    bs.kappa[q] = curvature_param(pc, t);
    kappa_max_abs = std::max(kappa_max_abs, std::fabs(bs.kappa[q]));
    px[q] = x.x;
    py[q] = x.y;
    kap[q] = bs.kappa[q];
  }

  DomainCurve curve;
  curve.samples_ = std::move(bs);
  curve.area_ = 0.5 * area2;
  curve.rmin_ = rmin;
  curve.rmax_ = rmax;
  curve.kappa_max_abs_ = kappa_max_abs;
  curve.tau0_ = std::min(0.5 / std::max(kappa_max_abs, 1e-300), collar_cap);
  curve.ix_ = TrigInterp(px, total_len);
  curve.iy_ = TrigInterp(py, total_len);
  curve.ikappa_ = TrigInterp(kap, total_len);
  if (curve.tau0_ * kappa_max_abs >= 1.0)
    throw ConfigError("collar failure: collar_depth * max|kappa| >= 1");

  // unwrapped polar angle table (strictly increasing by the star-shape check)
  curve.angle_.resize(m);
  double prev = std::atan2(curve.samples_.point[0].y, curve.samples_.point[0].x);
  curve.angle_[0] = prev;
  for (int q = 1; q < m; ++q) {
    double a = std::atan2(curve.samples_.point[q].y, curve.samples_.point[q].x);
    while (a < prev) a += 2 * M_PI;
    curve.angle_[q] = a;
    prev = a;
  }

  // collar embedding sanity: the inner collar boundary must keep distance
  // ~tau0 from the curve (guards against thin waists of star domains)
  const double hgrid = total_len / m;
  for (int q = 0; q < m; q += 4) {
    const Vec2 p = curve.samples_.point[q] + curve.samples_.normal[q] * curve.tau0_;
    double dmin = 1e300;
    for (int j = 0; j < m; ++j)
      dmin = std::min(dmin, (p - curve.samples_.point[j]).norm());
    if (dmin < curve.tau0_ * (1 - 1e-3) - hgrid)
      throw ConfigError("collar failure: collar of depth tau0 self-intersects");
  }
  return curve;
}

MetricTaylor metric_taylor(const DomainCurve& curve, int jmax) {
  if (jmax < 1) throw ConfigError("metric_taylor: order must be >= 1");
  const auto& kap = curve.samples().kappa;
  const int m = static_cast<int>(kap.size());
  MetricTaylor mt;
  mt.order = jmax;
  mt.theta_big.assign(jmax + 1, std::vector<double>(m, 0.0));
  mt.ell.assign(jmax + 1, std::vector<double>(m, 0.0));
  for (int q = 0; q < m; ++q) {
    double kp = 1.0;  // kappa^j
    mt.ell[0][q] = 1.0;
    for (int j = 1; j <= jmax; ++j) {
      kp *= kap[q];
      mt.theta_big[j][q] = -kp / j;
      mt.ell[j][q] = (j + 1) * kp;
    }
  }
  return mt;
}

}  // namespace exitwell
