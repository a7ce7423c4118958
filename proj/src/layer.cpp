#include "exitwell/layer.hpp"

#include <cmath>

#include "exitwell/errors.hpp"
#include "exitwell/fourier.hpp"

namespace exitwell {

LayerOperatorData::LayerOperatorData(const MetricTaylor& metric,
                                     const BoundaryTraces& traces,
                                     double period)
    : period_(period) {
  jmax_ = std::min<int>(metric.order, (int)traces.theta.size() - 1);
  if (jmax_ < 2)
    throw NumericalError("LayerOperatorData: need Taylor data to order >= 2");
  grid_ = (int)traces.theta[0].size();
  theta_.assign(traces.theta.begin(), traces.theta.begin() + jmax_ + 1);
  big_.assign(metric.theta_big.begin(), metric.theta_big.begin() + jmax_ + 1);
  ell_.assign(metric.ell.begin(), metric.ell.begin() + jmax_ + 1);
  theta_ds_.resize(jmax_ + 1);
  big_ds_.resize(jmax_ + 1);
  for (int j = 0; j <= jmax_; ++j) {
    theta_ds_[j] = spectral_derivative(theta_[j], period_);
    big_ds_[j] = spectral_derivative(big_[j], period_);
  }
}

namespace {
const std::vector<double>& pick(const std::vector<std::vector<double>>& v,
                                int j, const char* what) {
  if (j < 0 || j >= (int)v.size())
    throw NumericalError(std::string(what) + ": Taylor order " +
                         std::to_string(j) + " not available");
  return v[j];
}
}  // namespace

const std::vector<double>& LayerOperatorData::theta(int j) const {
  return pick(theta_, j, "theta");
}
const std::vector<double>& LayerOperatorData::theta_ds(int j) const {
  return pick(theta_ds_, j, "theta_ds");
}
const std::vector<double>& LayerOperatorData::big_theta(int j) const {
  return pick(big_, j, "big_theta");
}
const std::vector<double>& LayerOperatorData::big_theta_ds(int j) const {
  return pick(big_ds_, j, "big_theta_ds");
}
const std::vector<double>& LayerOperatorData::ell(int j) const {
  return pick(ell_, j, "ell");
}

LayerPolynomial solve_layer_ode(const std::vector<double>& theta1,
                                const LayerPolynomial& rhs,
                                double boundary_value) {
  const int m = (int)theta1.size();
  if (rhs.grid_size() != m)
    throw NumericalError("solve_layer_ode: grid size mismatch");
  const int dg = rhs.degree();
  LayerPolynomial out(dg + 1, m);
  for (int q = 0; q < m; ++q) {
    const double th1 = theta1[q];
    if (!(th1 < 0))
      throw AssumptionError(
          "solve_layer_ode: theta1 must be strictly negative (decay "
          "condition)");
    // With P = sum p_m zeta^m the exponential factor cancels and the ODE
    // reduces to -P'' - theta1 P' = G_poly; collecting powers of zeta gives
    // the triangular system
    //   theta1 (m+1) p_{m+1} + (m+2)(m+1) p_{m+2} = -g_m,
    // solved downward from the top degree; p_0 carries the boundary value.
    for (int mm = dg; mm >= 0; --mm) {
      const double above = (mm + 2 <= dg + 1) ? out.coeff[mm + 2][q] : 0.0;
      out.coeff[mm + 1][q] =
          (-rhs.coeff[mm][q] - (mm + 2) * (mm + 1) * above) / (th1 * (mm + 1));
    }
    out.coeff[0][q] = boundary_value;
  }
  return out;
}

namespace {

// analytic zeta-derivative acting on the coefficient polynomial of
// a·e^{theta1 zeta}:  (a' + theta1 a), same degree.
LayerPolynomial pdz(const LayerPolynomial& a, const std::vector<double>& th1) {
  const int d = a.degree(), m = a.grid_size();
  LayerPolynomial out(d, m);
  for (int mm = 0; mm <= d; ++mm)
    for (int q = 0; q < m; ++q) {
      double v = th1[q] * a.coeff[mm][q];
      if (mm + 1 <= d) v += (mm + 1) * a.coeff[mm + 1][q];
      out.coeff[mm][q] = v;
    }
  return out;
}

// tangential derivative: differentiates the coefficient arrays and adds the
// chain-rule term zeta·(d theta1/ds)·a coming from the exponential factor.
LayerPolynomial pds(const LayerPolynomial& a, const std::vector<double>& dth1,
                    double period) {
  const int d = a.degree(), m = a.grid_size();
  LayerPolynomial out(d + 1, m);
  for (int mm = 0; mm <= d; ++mm) {
    const std::vector<double> der = spectral_derivative(a.coeff[mm], period);
    for (int q = 0; q < m; ++q) {
      out.coeff[mm][q] += der[q];
      out.coeff[mm + 1][q] += dth1[q] * a.coeff[mm][q];
    }
  }
  return out;
}

void mul_inplace(LayerPolynomial& a, const std::vector<double>& w) {
  for (auto& row : a.coeff)
    for (int q = 0; q < (int)row.size(); ++q) row[q] *= w[q];
}

// out += zeta^shift * a
void add_shifted(LayerPolynomial& out, const LayerPolynomial& a, int shift) {
  for (int mm = 0; mm <= a.degree(); ++mm)
    for (int q = 0; q < a.grid_size(); ++q)
      out.coeff[mm + shift][q] += a.coeff[mm][q];
}

}  // namespace

LayerPolynomial apply_layer_operator(int i, const LayerPolynomial& p,
                                     const LayerOperatorData& ops) {
  if (i < 0) throw NumericalError("apply_layer_operator: negative order");
  if (i > ops.max_order())
    throw NumericalError(
        "apply_layer_operator: requested order exceeds available Taylor "
        "data (order " +
        std::to_string(i) + ", max " + std::to_string(ops.max_order()) + ")");
  const int m = ops.grid_size();
  if (p.grid_size() != m)
    throw NumericalError("apply_layer_operator: grid size mismatch");

  const auto& th1 = ops.theta1();
  const auto& dth1 = ops.theta_ds(1);
  LayerPolynomial out(p.degree() + i + 1, m);

  if (i >= 1) {
    // second-order tangential part of the metric Laplacian at this order:
    // d/ds ( ell_{i-1} d/ds · ), plus the drift from the s-derivative of the
    // log area factor
    LayerPolynomial inner = pds(p, dth1, ops.period());
    mul_inplace(inner, ops.ell(i - 1));
    LayerPolynomial t1 = pds(inner, dth1, ops.period());
    add_shifted(out, t1, i - 1);

    std::vector<double> w(m, 0.0);
    for (int q = 0; q <= i - 1; ++q) {
      const auto& lq = ops.ell(q);
      const auto& dth = ops.big_theta_ds(i - 1 - q);
      for (int g = 0; g < m; ++g) w[g] += lq[g] * dth[g];
    }
    LayerPolynomial t2 = pds(p, dth1, ops.period());
    mul_inplace(t2, w);
    add_shifted(out, t2, i - 1);
  }

  // normal-direction terms: Taylor tails of the potential's normal derivative
  // and of the log area factor against d/dzeta
  {
    LayerPolynomial dz = pdz(p, th1);
    LayerPolynomial t3 = dz;
    {
      std::vector<double> w(m);
      const auto& th = ops.theta(i + 2);
      for (int g = 0; g < m; ++g) w[g] = -(i + 2) * th[g];
      mul_inplace(t3, w);
    }
    add_shifted(out, t3, i + 1);

    LayerPolynomial t4 = dz;
    {
      std::vector<double> w(m);
      const auto& bt = ops.big_theta(i + 1);
      for (int g = 0; g < m; ++g) w[g] = (i + 1) * bt[g];
      mul_inplace(t4, w);
    }
    add_shifted(out, t4, i);
  }

  // tangential drift from the potential's s-gradient
  {
    std::vector<double> w(m, 0.0);
    for (int q = 0; q <= i; ++q) {
      const auto& lq = ops.ell(q);
      const auto& dth = ops.theta_ds(i - q);
      for (int g = 0; g < m; ++g) w[g] -= lq[g] * dth[g];
    }
    LayerPolynomial t5 = pds(p, dth1, ops.period());
    mul_inplace(t5, w);
    add_shifted(out, t5, i);
  }
  return out;
}

namespace {

LayerPolynomial add(const LayerPolynomial& a, const LayerPolynomial& b) {
  const int d = std::max(a.degree(), b.degree());
  LayerPolynomial out(d, std::max(a.grid_size(), b.grid_size()));
  add_shifted(out, a, 0);
  add_shifted(out, b, 0);
  return out;
}

void check_degree(const LayerPolynomial& p, int bound, const char* what) {
  if (p.degree() <= bound) return;
  // a larger formal degree is only acceptable if the extra coefficients
  // vanish; anything else is a defect worth surfacing, not truncating
  for (int mm = bound + 1; mm <= p.degree(); ++mm)
    for (double v : p.coeff[mm])
      if (std::fabs(v) > 1e-10)
        throw NumericalError(std::string(what) +
                             ": degree bound violated with non-vanishing "
                             "leading coefficient");
}

}  // namespace

std::vector<LayerPolynomial> phi_sequence(int N, const LayerOperatorData& ops) {
  const int m = ops.grid_size();
  std::vector<LayerPolynomial> phis;
  LayerPolynomial one(0, m);
  for (int q = 0; q < m; ++q) one.coeff[0][q] = 1.0;
  phis.push_back(one);
  for (int j = 1; j <= N; ++j) {
    LayerPolynomial rhs(0, m);
    for (int i = 0; i <= j - 1; ++i)
      rhs = add(rhs, apply_layer_operator(i, phis[j - 1 - i], ops));
    LayerPolynomial next = solve_layer_ode(ops.theta1(), rhs, 0.0);
    check_degree(next, 2 * j, "phi_sequence");
    phis.push_back(std::move(next));
  }
  return phis;
}

std::vector<LayerPolynomial> u_sequence(int N,
                                        const std::vector<LayerPolynomial>& phis,
                                        const LayerOperatorData& ops) {
  if ((int)phis.size() < N)
    throw NumericalError("u_sequence: need the eigenfunction layers to order " +
                         std::to_string(N - 1));
  std::vector<LayerPolynomial> us;
  for (int j = 1; j <= N; ++j) {
    LayerPolynomial rhs = phis[j - 1];
    for (int i = 0; i <= j - 2; ++i)
      rhs = add(rhs, apply_layer_operator(i, us[j - 2 - i], ops));
    LayerPolynomial next = solve_layer_ode(ops.theta1(), rhs, 0.0);
    check_degree(next, 2 * j - 1, "u_sequence");
    us.push_back(std::move(next));
  }
  return us;
}

std::vector<double> layer_zeta_moment(const LayerPolynomial& p, int r,
                                      const std::vector<double>& theta1) {
  const int m = p.grid_size();
  if ((int)theta1.size() != m)
    throw NumericalError("layer_zeta_moment: grid size mismatch");
  static const auto factorial = [] {
    std::vector<double> f(33, 1.0);
    for (int n = 1; n < 33; ++n) f[n] = f[n - 1] * n;
    return f;
  }();
  if (p.degree() + r + 1 >= (int)factorial.size())
    throw NumericalError("layer_zeta_moment: degree too large");
  std::vector<double> out(m, 0.0);
  for (int q = 0; q < m; ++q) {
    const double a = -theta1[q];
    if (!(a > 0))
      throw AssumptionError("layer_zeta_moment: theta1 must be negative");
    double apow = std::pow(a, r + 1);
    for (int mm = 0; mm <= p.degree(); ++mm) {
      apow *= (mm == 0) ? 1.0 : a;
      out[q] += p.coeff[mm][q] * factorial[mm + r] / apow;
    }
  }
  return out;
}

}  // namespace exitwell
