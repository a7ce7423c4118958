#pragma once
#include <string>
#include <vector>

#include "exitwell/geometry.hpp"

namespace exitwell {

// One term c·x^i·y^j of a bivariate polynomial.
struct Monomial {
  int i = 0, j = 0;
  double c = 0;
};

struct PotentialSpec {
  enum class Kind { RadialPower, QuadraticForm, Polynomial };
  Kind kind = Kind::QuadraticForm;
  // radial_power: V = scale * |x|^k / k (k even)
  int power = 2;
  double scale = 1.0;
  // quadratic_form: V = (axx x^2 + 2 axy x y + ayy y^2)/2, SPD required
  double axx = 1.0, axy = 0.0, ayy = 1.0;
  // polynomial: explicit monomials
  std::vector<Monomial> monomials;
};

// Single-well polynomial potential: V(0) = 0, grad V(0) = 0, lowest-degree
// homogeneous part positive away from the origin.
class Potential {
 public:
  double value(const Vec2& p) const;
  Vec2 gradient(const Vec2& p) const;
  double laplacian(const Vec2& p) const;

  int origin_degree() const { return k_; }  // degree of the leading form
  const std::vector<Monomial>& monomials() const { return mono_; }
  // homogeneous part of the given total degree (V0 = origin_form(k), etc.)
  std::vector<Monomial> origin_form(int degree) const;

  bool is_radial() const { return radial_; }
  double radial_value(double r) const { return value({r, 0.0}); }
  double radial_d1(double r) const { return gradient({r, 0.0}).x; }
  double radial_d2(double r) const;

  friend Potential build_potential(const PotentialSpec& spec);

 private:
  std::vector<Monomial> mono_;
  int k_ = 2;
  bool radial_ = false;
};

Potential build_potential(const PotentialSpec& spec);

// Taylor coefficients of V along the inward normal ray:
//   V(x(s) + tau nu(s)) = sum_j theta[j](s) tau^j   (exact for polynomials).
struct BoundaryTraces {
  std::vector<std::vector<double>> theta;  // theta[j][q], j = 0..order
  std::vector<double> dtheta0_ds;          // spectral derivative of theta[0]
  double theta_min = 0;                    // min_s theta0
  double c2 = 0;  // min over the collar grid of -dV/dtau (measured)
};

BoundaryTraces boundary_traces(const Potential& pot, const DomainCurve& curve,
                               int jmax);

// Measured constants behind the standing assumptions, with pass/fail flags.
struct AssumptionReport {
  double rho1 = 0.1;     // radius of the excluded ball around the origin
  double c1 = 0;         // min |grad V| outside B_rho1 (within the domain)
  double c2 = 0;         // min of -dV/dtau over the collar grid
  double theta_min = 0;  // min boundary trace
  double v_min_off_origin = 0;
  bool ok_origin = false;      // V(0)=0 and grad V(0)=0
  bool ok_leading_form = false;  // V0 > 0 away from 0
  bool ok_gradient = false;    // c1 > 0
  bool ok_theta1 = false;      // boundary normal derivative strictly negative
  bool ok_theta_min = false;   // theta_min > 0
  bool ok_positive = false;    // V > 0 on the domain away from the origin
  bool all_ok() const {
    return ok_origin && ok_leading_form && ok_gradient && ok_theta1 &&
           ok_theta_min && ok_positive;
  }
};

AssumptionReport check_assumptions(const Potential& pot,
                                   const DomainCurve& curve,
                                   double rho1 = 0.1);

}  // namespace exitwell
