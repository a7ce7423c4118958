#pragma once
#include <vector>

#include "exitwell/geometry.hpp"
#include "exitwell/potential.hpp"

namespace exitwell {

// Polynomial part of a boundary-layer function in the stretched variable
// zeta = tau/eps^2: the layer function is (sum_m coeff[m](s) zeta^m) times
// exp(theta1(s) zeta), with the coefficient functions sampled on the
// arc-length grid.
struct LayerPolynomial {
  std::vector<std::vector<double>> coeff;  // coeff[m][q]

  LayerPolynomial() = default;
  LayerPolynomial(int degree, int grid)
      : coeff(degree + 1, std::vector<double>(grid, 0.0)) {}

  int degree() const { return static_cast<int>(coeff.size()) - 1; }
  int grid_size() const { return coeff.empty() ? 0 : (int)coeff[0].size(); }

  // sum_m coeff[m][q] zeta^m
  double poly(int q, double zeta) const {
    double v = 0;
    for (int m = degree(); m >= 0; --m) v = v * zeta + coeff[m][q];
    return v;
  }
  // d/dzeta of the polynomial part
  double poly_d1(int q, double zeta) const {
    double v = 0;
    for (int m = degree(); m >= 1; --m) v = v * zeta + m * coeff[m][q];
    return v;
  }
  double poly_d2(int q, double zeta) const {
    double v = 0;
    for (int m = degree(); m >= 2; --m) v = v * zeta + m * (m - 1) * coeff[m][q];
    return v;
  }
};

// Precomputed Taylor/derivative arrays feeding the operator family:
// boundary traces theta_j, metric coefficients Theta_j (log of the area
// factor) and ell_j (tangential metric factor), plus their spectral
// s-derivatives.
class LayerOperatorData {
 public:
  LayerOperatorData(const MetricTaylor& metric, const BoundaryTraces& traces,
                    double period);

  int max_order() const { return jmax_ - 2; }  // largest usable operator index
  int grid_size() const { return grid_; }
  double period() const { return period_; }

  const std::vector<double>& theta(int j) const;
  const std::vector<double>& theta_ds(int j) const;
  const std::vector<double>& big_theta(int j) const;
  const std::vector<double>& big_theta_ds(int j) const;
  const std::vector<double>& ell(int j) const;
  const std::vector<double>& theta1() const { return theta(1); }

 private:
  int jmax_ = 0, grid_ = 0;
  double period_ = 0;
  std::vector<std::vector<double>> theta_, theta_ds_, big_, big_ds_, ell_;
};

// Unique polynomially-bounded solution of the conjugated layer problem: the
// layer function P·e^{theta1 zeta} solves -Q'' + theta1 Q' = G·e^{theta1 zeta},
// which on the coefficient polynomials reads -P'' - theta1 P' = G.  The value
// at zeta = 0 is prescribed.  Output degree = rhs degree + 1.
LayerPolynomial solve_layer_ode(const std::vector<double>& theta1,
                                const LayerPolynomial& rhs,
                                double boundary_value);

// Order-2i coefficient of the collar expansion of the conjugated generator,
// acting on a layer coefficient polynomial.  Output degree <= input + i + 1.
LayerPolynomial apply_layer_operator(int i, const LayerPolynomial& p,
                                     const LayerOperatorData& ops);

// Eigenfunction layer sequence Phi_0..Phi_N (Phi_0 = 1, boundary value 0 for
// j >= 1); degree of Phi_j is exactly 2j.
std::vector<LayerPolynomial> phi_sequence(int N, const LayerOperatorData& ops);

// Exit-time layer sequence U_1..U_N (boundary value 0); degree of U_j is
// exactly 2j-1.  Requires phis up to N-1.
std::vector<LayerPolynomial> u_sequence(int N,
                                        const std::vector<LayerPolynomial>& phis,
                                        const LayerOperatorData& ops);

// Per-s values of the full-line moments
//   integral_0^inf zeta^r (sum_m c_m zeta^m) e^{theta1 zeta} dzeta
//     = sum_m c_m (m+r)! / (-theta1)^{m+r+1}.
std::vector<double> layer_zeta_moment(const LayerPolynomial& p, int r,
                                      const std::vector<double>& theta1);

}  // namespace exitwell
