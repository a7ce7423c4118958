#include "exitwell/quad.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "exitwell/errors.hpp"

namespace exitwell {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

// shifted exponential weights e^{-(theta0 - theta_min)/eps^2} on the s-grid
std::vector<double> shifted_weights(const BoundaryTraces& traces, double eps) {
  const auto& th0 = traces.theta[0];
  std::vector<double> w(th0.size());
  for (size_t q = 0; q < th0.size(); ++q)
    w[q] = std::exp(-(th0[q] - traces.theta_min) / (eps * eps));
  return w;
}

// d/dzeta at zeta = 0 of the full layer function (polynomial times
// exponential): c_1 + theta1 c_0.
std::vector<double> layer_slope_at_zero(const LayerPolynomial& p,
                                        const std::vector<double>& th1) {
  const int m = p.grid_size();
  std::vector<double> out(m, 0.0);
  for (int q = 0; q < m; ++q) {
    double v = th1[q] * p.coeff[0][q];
    if (p.degree() >= 1) v += p.coeff[1][q];
    out[q] = v;
  }
  return out;
}

}  // namespace

std::vector<double> mu_table_reduced(const BoundaryTraces& traces,
                                     const std::vector<LayerPolynomial>& phis,
                                     double eps) {
  const auto& th1 = traces.theta[1];
  const int m = (int)th1.size();
  const auto w = shifted_weights(traces, eps);
  // periodic trapezoid rule, returned as the grid mean; the caller multiplies
  // by the boundary length (the trace arrays do not carry it)
  std::vector<double> out;
  for (const auto& p : phis) {
    const auto slope = layer_slope_at_zero(p, th1);
    double acc = 0;
    for (int q = 0; q < m; ++q) acc += -slope[q] * w[q];
    out.push_back(acc / m);
  }
  return out;
}

std::vector<double> eta_table_reduced(const BoundaryTraces& traces,
                                      const std::vector<LayerPolynomial>& us,
                                      double eps) {
  const auto& th1 = traces.theta[1];
  const int m = (int)th1.size();
  const auto w = shifted_weights(traces, eps);
  std::vector<double> out;
  {
    double acc = 0;
    for (int q = 0; q < m; ++q) acc += -w[q] / th1[q];
    out.push_back(acc / m);
  }
  for (size_t j = 1; j < us.size(); ++j) {
    const auto slope = layer_slope_at_zero(us[j], th1);
    double acc = 0;
    for (int q = 0; q < m; ++q) acc += slope[q] * w[q];
    out.push_back(acc / m);
  }
  return out;
}

double volume_integral(const Potential& pot, const DomainCurve& curve,
                       double eps) {
  const double e2 = eps * eps;
  const int na = std::max(256, curve.grid_size());
  double acc = 0;
  for (int a = 0; a < na; ++a) {
    const double phi = 2 * M_PI * a / na;
    const double R = curve.radius_at_angle(phi);
    const double c = std::cos(phi), s = std::sin(phi);
    auto f = [&](double r) {
      return r * std::exp(-pot.value({r * c, r * s}) / e2);
    };
    double err = 0;
    const double ray = GK::integrate(f, 0.0, R, 12, 1e-11, &err);
    if (!(std::isfinite(ray)))
      throw NumericalError("volume_integral: radial quadrature failed");
    acc += ray;
  }
  return acc * (2 * M_PI / na);
}

std::pair<double, double> alpha_leading(const Potential& pot) {
  const int k = pot.origin_degree();
  const auto v0 = pot.origin_form(k);
  const auto v1 = pot.origin_form(k + 1);
  auto angular = [](const std::vector<Monomial>& form, double c, double s) {
    double h = 0;
    for (const auto& mo : form) {
      double t = mo.c;
      for (int i = 0; i < mo.i; ++i) t *= c;
      for (int j = 0; j < mo.j; ++j) t *= s;
      h += t;
    }
    return h;
  };
  // with V0 = r^k h(phi), h > 0:
  //   int_0^inf e^{-r^k h} r dr           = Gamma(2/k)   / (k h^{2/k})
  //   int_0^inf r^{k+1} e^{-r^k h} r dr   = Gamma((k+3)/k) / (k h^{(k+3)/k})
  const int na = 4096;
  const double g2 = std::tgamma(2.0 / k) / k;
  const double g3 = std::tgamma((k + 3.0) / k) / k;
  double a0 = 0, a1 = 0;
  for (int a = 0; a < na; ++a) {
    const double phi = 2 * M_PI * a / na;
    const double c = std::cos(phi), s = std::sin(phi);
    const double h = angular(v0, c, s);
    if (!(h > 0))
      throw AssumptionError("alpha_leading: leading form not positive");
    a0 += g2 * std::pow(h, -2.0 / k);
    if (!v1.empty()) a1 += g3 * angular(v1, c, s) * std::pow(h, -(k + 3.0) / k);
  }
  return {a0 * 2 * M_PI / na, a1 * 2 * M_PI / na};
}

LaplaceDiagnostic laplace_leading_mu(const BoundaryTraces& traces,
                                     double period, double eps) {
  LaplaceDiagnostic diag;
  const auto& th0 = traces.theta[0];
  const auto& th1 = traces.theta[1];
  const int m = (int)th0.size();
  const double th0_max = *std::max_element(th0.begin(), th0.end());
  const double scale = std::max(1.0, std::fabs(th0_max));

  if (th0_max - traces.theta_min < 1e-12 * scale) {
    // constant boundary trace: the full integral is already the closed form
    double acc = 0;
    for (int q = 0; q < m; ++q) acc += -th1[q];
    acc *= period / m;
    diag.available = true;
    diag.value = LogScalar::from_value(acc) *
                 LogScalar::from_log(-traces.theta_min / (eps * eps), 1);
    diag.note = "constant boundary trace: closed form is exact";
    return diag;
  }

  // isolated minima of theta0 on the periodic grid; refine each by Newton on
  // the spectral derivative and read off the second derivative
  const auto d1 = spectral_derivative(th0, period);
  const auto d2 = spectral_derivative(d1, period);
  TrigInterp ith0(th0, period), id1(d1, period), id2(d2, period),
      ith1(th1, period);
  double sum = 0;
  int count = 0;
  for (int q = 0; q < m; ++q) {
    const int prev = (q + m - 1) % m, next = (q + 1) % m;
    if (!(th0[q] <= th0[prev] && th0[q] < th0[next])) continue;
    double s = q * period / m;
    for (int it = 0; it < 40; ++it) {
      const double step = id1.eval(s) / id2.eval(s);
      s -= step;
      if (std::fabs(step) < 1e-14 * period) break;
    }
    const double curv = id2.eval(s);
    if (!(curv > 1e-8 * scale)) {
      diag.note =
          "declined: boundary trace has a degenerate (non-quadratic) minimum; "
          "the fractional-power closed form has a non-constructive constant";
      return diag;
    }
    // contribution (-theta1(s*)) * sqrt(2 pi eps^2 / theta0''(s*))
    sum += -ith1.eval(s) * std::sqrt(2 * M_PI * eps * eps / curv);
    ++count;
  }
  if (count == 0) {
    diag.note = "declined: no isolated minima found on the grid";
    return diag;
  }
  diag.available = true;
  diag.value = LogScalar::from_value(sum) *
               LogScalar::from_log(-traces.theta_min / (eps * eps), 1);
  diag.note = std::to_string(count) + " nondegenerate boundary minima";
  return diag;
}

IntegralTable build_integral_table(const Potential& pot,
                                   const DomainCurve& curve,
                                   const BoundaryTraces& traces,
                                   const std::vector<LayerPolynomial>& phis,
                                   const std::vector<LayerPolynomial>& us,
                                   int N, double eps) {
  if ((int)phis.size() < N + 1 || (int)us.size() < N + 1)
    throw NumericalError(
        "build_integral_table: layer sequences shorter than requested order");
  IntegralTable t;
  t.eps = eps;
  t.order = N;
  t.log_scale = -traces.theta_min / (eps * eps);

  const double L = curve.length();
  auto mu_all = mu_table_reduced(traces, phis, eps);
  auto eta_all = eta_table_reduced(traces, us, eps);
  mu_all.resize(N + 1);
  eta_all.resize(N + 1);
  for (double& v : mu_all) v *= L;
  for (double& v : eta_all) v *= L;
  t.mu_reduced = mu_all;
  t.eta_reduced = eta_all;
  const LogScalar shift = LogScalar::from_log(t.log_scale, 1);
  for (int j = 0; j <= N; ++j) {
    t.mu.push_back(LogScalar::from_value(mu_all[j]) * shift);
    t.eta.push_back(LogScalar::from_value(eta_all[j]) * shift);
  }
  if (!(t.mu_reduced[0] > 0))
    throw NumericalError("integral table: mu_0 must be positive");

  t.volume = volume_integral(pot, curve, eps);
  if (!(t.volume > 0)) throw NumericalError("integral table: volume <= 0");
  auto [a0, a1] = alpha_leading(pot);
  t.alpha_n = a0;
  t.alpha_n1 = a1;
  return t;
}

}  // namespace exitwell
