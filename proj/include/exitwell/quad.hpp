#pragma once
#include <string>
#include <vector>

#include "exitwell/geometry.hpp"
#include "exitwell/layer.hpp"
#include "exitwell/logscalar.hpp"
#include "exitwell/potential.hpp"

namespace exitwell {

// All eps-dependent integrals entering the assembled outputs.  The boundary
// functionals mu_j, eta_j are exponentially small (scale e^{-theta_min/eps^2});
// alongside the log-space values we keep "reduced" linear values with that
// common factor divided out, which is what all internal ratios use.
struct IntegralTable {
  double eps = 0;
  int order = 0;              // N: mu has entries 0..N, eta has 1..N+1
  double log_scale = 0;       // -theta_min/eps^2
  std::vector<double> mu_reduced;   // mu_j * e^{+theta_min/eps^2}
  std::vector<double> eta_reduced;  // eta_{j+1} * e^{+theta_min/eps^2}, j = 0..N
  std::vector<LogScalar> mu;        // j = 0..N
  std::vector<LogScalar> eta;       // eta[j] is eta_{j+1}, j = 0..N
  double volume = 0;                // integral of e^{-V/eps^2} over the domain
  double alpha_n = 0, alpha_n1 = 0;
};

// Boundary functionals of the eigenfunction layers:
//   mu_j = -closed-integral e^{-theta0/eps^2} (d/dzeta at 0 of layer j) ds,
// evaluated by the periodic trapezoid rule in shifted form.  Returns the
// reduced linear values; multiply by e^{log_scale} for the true ones.
std::vector<double> mu_table_reduced(const BoundaryTraces& traces,
                                     const std::vector<LayerPolynomial>& phis,
                                     double eps);

// Same for the exit-time layers: the j = 1 entry is
//   eta_1 = -closed-integral e^{-theta0/eps^2} / theta1 ds
// and for j >= 2 the integrand is the zeta-derivative at 0 of layer U_j
// (positive orientation; cross-checked against the exact radial solution).
std::vector<double> eta_table_reduced(const BoundaryTraces& traces,
                                      const std::vector<LayerPolynomial>& us,
                                      double eps);

// integral over the domain of e^{-V/eps^2}, by polar rays from the origin
// with adaptive radial quadrature and spectrally accurate angular trapezoid.
double volume_integral(const Potential& pot, const DomainCurve& curve,
                       double eps);

// Leading coefficients of the small-eps volume law:
//   alpha_n   = integral over the plane of e^{-V0},
//   alpha_n+1 = integral of V1 e^{-V0},
// computed by the exact radial reduction of the homogeneous forms.
std::pair<double, double> alpha_leading(const Potential& pot);

// Closed-form leading term of mu_0 (diagnostic only): exact for constant
// boundary trace, Gaussian approximation summed over nondegenerate minima
// otherwise; declines for degenerate non-constant minima.
struct LaplaceDiagnostic {
  bool available = false;
  LogScalar value;
  std::string note;
};
LaplaceDiagnostic laplace_leading_mu(const BoundaryTraces& traces,
                                     double period, double eps);

// Convenience: everything at once.
IntegralTable build_integral_table(const Potential& pot,
                                   const DomainCurve& curve,
                                   const BoundaryTraces& traces,
                                   const std::vector<LayerPolynomial>& phis,
                                   const std::vector<LayerPolynomial>& us,
                                   int N, double eps);

}  // namespace exitwell
