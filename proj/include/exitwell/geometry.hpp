#pragma once
#include <string>
#include <vector>

#include "exitwell/fourier.hpp"

namespace exitwell {

struct Vec2 {
  double x = 0, y = 0;
  Vec2() = default;
  Vec2(double xx, double yy) : x(xx), y(yy) {}
  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double c) const { return {x * c, y * c}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm2() const { return x * x + y * y; }
  double norm() const;
};

// Boundary curve descriptor.  fourier_star means
// r(phi) = r0 + sum_k cos_coeffs[k-1]·cos(k·phi) + sin_coeffs[k-1]·sin(k·phi).
struct CurveSpec {
  enum class Kind { Circle, Ellipse, FourierStar };
  Kind kind = Kind::Circle;
  double radius = 1.0;        // circle
  double a = 1.0, b = 1.0;    // ellipse semi-axes
  double r0 = 1.0;            // star base radius
  std::vector<double> cos_coeffs, sin_coeffs;
};

// Samples of the closed boundary on a uniform arc-length grid s_q = q·L/m
// (counterclockwise).  normal points inward; curvature is positive for the
// unit circle with this orientation.
struct BoundarySamples {
  double length = 0;
  std::vector<double> s;
  std::vector<Vec2> point, tangent, normal;
  std::vector<double> kappa;
};

enum class CollarStatus { Inside, Exterior, DeepInterior };

struct CollarCoords {
  CollarStatus status = CollarStatus::Inside;
  double s = 0;    // arc length of the nearest boundary point
  double tau = 0;  // signed distance along the inward normal (< 0 outside)
};

class DomainCurve {
 public:
  DomainCurve() = default;

  int grid_size() const { return static_cast<int>(samples_.s.size()); }
  double length() const { return samples_.length; }
  double area() const { return area_; }
  double collar_depth() const { return tau0_; }
  double max_abs_curvature() const { return kappa_max_abs_; }
  double min_radius() const { return rmin_; }
  double max_radius() const { return rmax_; }
  const BoundarySamples& samples() const { return samples_; }

  // Off-grid boundary data from the trigonometric interpolant of the samples.
  Vec2 point_at(double s) const;
  Vec2 tangent_at(double s) const;
  Vec2 normal_at(double s) const;
  double curvature_at(double s) const;

  // x(s) + tau·nu(s); requires 0 <= tau <= collar_depth.
  Vec2 collar_point(double s, double tau) const;

  // Closest-point projection: Newton on the orthogonality condition seeded
  // from a full grid scan, with a dense-search fallback.  Never fails.
  CollarCoords locate(const Vec2& p) const;

  // Boundary radius in direction phi (requires the curve to be star-shaped
  // with respect to the origin, which is checked at build time).
  double radius_at_angle(double phi) const;

  friend DomainCurve build_curve(const CurveSpec& spec, int grid_size,
                                 double collar_cap);

 private:
  BoundarySamples samples_;
  double tau0_ = 0, area_ = 0, rmin_ = 0, rmax_ = 0, kappa_max_abs_ = 0;
  TrigInterp ix_, iy_, ikappa_;
  std::vector<double> angle_;  // unwrapped polar angle of point[q]
};

// Resample the described curve onto a uniform arc-length grid (grid_size must
// be a power of two).  collar_cap bounds the collar depth from above;
// the depth is min(0.5/max|kappa|, collar_cap).
DomainCurve build_curve(const CurveSpec& spec, int grid_size,
                        double collar_cap = 1e30);

// Taylor data of the collar metric factors.  With arc length in 2D the area
// element is J = 1 - tau·kappa and the tangential metric factor is
// L = (1 - tau·kappa)^{-2}, so
//   ln J  = sum_j theta_big[j]·tau^j,   theta_big[0] = 0,
//                                       theta_big[j] = -kappa^j/j  (j >= 1),
//   L     = sum_j ell[j]·tau^j,         ell[j] = (j+1)·kappa^j.
struct MetricTaylor {
  int order = 0;  // arrays run j = 0..order
  std::vector<std::vector<double>> theta_big, ell;
};

MetricTaylor metric_taylor(const DomainCurve& curve, int jmax);

}  // namespace exitwell
