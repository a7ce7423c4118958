#pragma once
#include <memory>
#include <string>
#include <vector>

#include "exitwell/geometry.hpp"
#include "exitwell/layer.hpp"
#include "exitwell/logscalar.hpp"
#include "exitwell/potential.hpp"
#include "exitwell/quad.hpp"

namespace exitwell {

// Smooth cutoff in the collar depth tau: equals 1 for tau <= delta/3,
// vanishes for tau >= 2 delta/3, C-infinity in between (standard
// exp(-1/t) mollifier profile).
class CutoffChi {
 public:
  CutoffChi() = default;
  explicit CutoffChi(double delta);
  double delta() const { return delta_; }
  double value(double tau) const;

 private:
  double delta_ = 0;
};

// Per-eps assembled scalars.  lambda is the truncated principal-eigenvalue
// series over the volume integral; k_exp/k_pow are the exponentially large
// and power-bounded parts of the exit-time plateau constant K = k_exp + k_pow.
struct ScalarSet {
  double eps = 0;
  IntegralTable table;
  LogScalar lambda, k_exp, k_total;
  double k_pow = 0;
  bool lambda_positive = true;
  std::string truncation_note;  // nonempty when the truncation misbehaves
};

// Everything derived from (curve, potential, order N): Taylor data, layer
// sequences, cutoff, and evaluators.  Immutable after construction; safe for
// concurrent reads.
class Expansion {
 public:
  Expansion(const DomainCurve& curve, const Potential& pot, int order,
            double delta_scale = 0.9);

  int order() const { return order_; }
  const DomainCurve& curve() const { return curve_; }
  const Potential& potential() const { return pot_; }
  const BoundaryTraces& traces() const { return traces_; }
  const MetricTaylor& metric() const { return metric_; }
  const std::vector<LayerPolynomial>& phis() const { return phis_; }
  const std::vector<LayerPolynomial>& us() const { return us_; }
  const CutoffChi& chi() const { return chi_; }
  const LayerOperatorData& ops() const { return *ops_; }

  ScalarSet scalars(double eps) const;

  // principal eigenfunction approximation Psi at a point of the closed domain
  double eigenfunction(double eps, const Vec2& x) const;

  // mean exit time u at a point; the ScalarSet overload avoids rebuilding the
  // integral tables on repeated calls
  double mean_exit_time(const ScalarSet& sc, const Vec2& x) const;
  double mean_exit_time(double eps, const Vec2& x) const;

  // collar-coordinate evaluation at a grid node s_q (exact layer data, no
  // interpolation); used by the direct quadratures
  double psi_grid(double eps, int q, double tau) const;
  double u_grid(const ScalarSet& sc, int q, double tau) const;

  // domain-integral of u via the layer moments (the assembled closed form)
  LogScalar torsional_rigidity(const ScalarSet& sc) const;
  // same quantity by direct 2D quadrature of the evaluator
  double torsional_direct(const ScalarSet& sc) const;

  struct MaxExit {
    double k_value = 0;     // the plateau constant K
    double grid_max = 0;    // max of the evaluator over a sample grid
    Vec2 argmax;            // location of the sampled maximum
    double tau_at_max = 0;  // its collar depth (large = outside the layer)
  };
  MaxExit max_exit_time(const ScalarSet& sc) const;

  // integral of e^{-V/eps^2} Psi over the domain (QSD normalization);
  // angular_factor scales the number of rays for independent cross-checks
  double qsd_normalization(double eps, int angular_factor = 1,
                           double tol = 1e-10) const;
  double qsd_density(double eps, const Vec2& x, double normalization) const;

  // boundary exit-law density on the s-grid, normalized so the periodic
  // trapezoid integral is exactly 1; flags negative truncation artifacts
  std::vector<double> exit_law_density(double eps,
                                       bool* negative_flagged = nullptr) const;
  // expectation of a boundary function (sampled on the s-grid) under that law
  double exit_expectation(double eps, const std::vector<double>& f) const;

 private:
  DomainCurve curve_;
  Potential pot_;
  int order_;
  MetricTaylor metric_;
  BoundaryTraces traces_;
  std::unique_ptr<LayerOperatorData> ops_;
  std::vector<LayerPolynomial> phis_;  // 0..N
  std::vector<LayerPolynomial> us_;    // U_1..U_{N+1}
  CutoffChi chi_;
  TrigInterp ith1_;
  std::vector<std::vector<TrigInterp>> iphi_, iu_;

  // resolves a point to collar data with a tolerance band at the boundary
  struct Resolved {
    bool deep = false;
    double s = 0, tau = 0;
  };
  Resolved resolve(const Vec2& x) const;
  double layer_sum_phi(double eps, double s, double zeta) const;
  double layer_sum_u(double eps, double s, double zeta) const;
};

}  // namespace exitwell
