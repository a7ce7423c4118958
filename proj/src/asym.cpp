#include "exitwell/asym.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <memory>

#include "exitwell/errors.hpp"

namespace exitwell {

using boost::math::quadrature::gauss_kronrod;

CutoffChi::CutoffChi(double delta) : delta_(delta) {
  if (!(delta > 0)) throw ConfigError("cutoff width must be positive");
}

double CutoffChi::value(double tau) const {
  const double t = 3.0 * tau / delta_;
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  const double fa = std::exp(-1.0 / (2.0 - t));  // falls to 0 as t -> 2
  const double fb = std::exp(-1.0 / (t - 1.0));  // rises from 0 as t -> 1
  return fa / (fa + fb);
}

Expansion::Expansion(const DomainCurve& curve, const Potential& pot, int order,
                     double delta_scale)
    : curve_(curve), pot_(pot), order_(order) {
  if (order_ < 0 || order_ > 12)
    throw ConfigError("expansion order must lie in [0, 12]");
  if (!(delta_scale > 0.0) || delta_scale >= 1.0)
    throw ConfigError("delta_scale must lie in (0, 1)");

  const int jmax = order_ + 2;  // Taylor depth needed by the operator family
  metric_ = metric_taylor(curve_, jmax);
  traces_ = boundary_traces(pot_, curve_, jmax);
  ops_ = std::make_unique<LayerOperatorData>(metric_, traces_, curve_.length());
  phis_ = phi_sequence(order_, *ops_);
  us_ = u_sequence(order_ + 1, phis_, *ops_);

  // Cutoff width: stay inside the collar and inside the region where the
  // normal trace of V keeps growing (so the layer profiles stay controlled).
  const double cap =
      std::min(curve_.collar_depth(), traces_.theta_min / (4.0 * traces_.c2));
  chi_ = CutoffChi(delta_scale * cap);

  const double L = curve_.length();
  ith1_ = TrigInterp(traces_.theta[1], L);
  iphi_.resize(phis_.size());
  for (std::size_t j = 0; j < phis_.size(); ++j) {
    iphi_[j].reserve(phis_[j].degree() + 1);
    for (int m = 0; m <= phis_[j].degree(); ++m)
      iphi_[j].emplace_back(phis_[j].coeff[m], L);
  }
  iu_.resize(order_);  // the evaluator needs U_1..U_N only
  for (int j = 0; j < order_; ++j) {
    iu_[j].reserve(us_[j].degree() + 1);
    for (int m = 0; m <= us_[j].degree(); ++m)
      iu_[j].emplace_back(us_[j].coeff[m], L);
  }
}

ScalarSet Expansion::scalars(double eps) const {
  if (!(eps > 0)) throw ConfigError("eps must be positive");
  ScalarSet sc;
  sc.eps = eps;
  sc.table = build_integral_table(pot_, curve_, traces_, phis_, us_, order_, eps);

  const double e2 = eps * eps;
  double s_mu = 0, s_eta = 0, pw = 1;
  for (int j = 0; j <= order_; ++j) {
    s_mu += pw * sc.table.mu_reduced[j];
    s_eta += pw * sc.table.eta_reduced[j];
    pw *= e2;
  }
  sc.lambda_positive = s_mu > 0;
  if (!sc.lambda_positive)
    sc.truncation_note =
        "truncated eigenvalue numerator is nonpositive at this eps; "
        "the asymptotic series is outside its useful range here";

  const int sgn = (s_mu > 0) ? 1 : (s_mu < 0 ? -1 : 0);
  if (sgn == 0) throw NumericalError("eigenvalue numerator vanished exactly");
  // a = log of the (unreduced) numerator magnitude; keeping it as a single
  // double makes lambda and k_exp exact log-reciprocals of each other
  const double a = std::log(std::fabs(s_mu)) + sc.table.log_scale;
  const double lv = std::log(sc.table.volume);
  sc.lambda = LogScalar::from_log(a - lv, sgn);
  sc.k_exp = LogScalar::from_log(lv - a, sgn);
  sc.k_pow = -e2 * s_eta / s_mu;
  sc.k_total = sc.k_exp + LogScalar::from_value(sc.k_pow);
  if (sc.k_total.sign <= 0 && sc.truncation_note.empty())
    sc.truncation_note =
        "plateau constant lost positivity after truncation at this eps";
  return sc;
}

Expansion::Resolved Expansion::resolve(const Vec2& x) const {
  const CollarCoords cc = curve_.locate(x);
  Resolved r;
  r.s = cc.s;
  r.tau = cc.tau;
  if (cc.status == CollarStatus::DeepInterior) {
    r.deep = true;
    return r;
  }
  if (cc.status == CollarStatus::Exterior) {
    // tolerate rounding-level excursions of points meant to sit on the curve
    if (cc.tau < -1e-9 * curve_.length())
      throw NumericalError("evaluation point lies outside the closed domain");
    r.tau = 0;
  }
  return r;
}

double Expansion::layer_sum_phi(double eps, double s, double zeta) const {
  const TrigBasis b = ith1_.basis(s);
  const double e2 = eps * eps;
  double acc = 0, pw = 1;
  for (std::size_t j = 0; j < iphi_.size(); ++j) {
    double val = 0;
    for (int m = (int)iphi_[j].size() - 1; m >= 0; --m)
      val = val * zeta + iphi_[j][m].eval(b);
    acc += pw * val;
    pw *= e2;
  }
  return acc;
}

double Expansion::layer_sum_u(double eps, double s, double zeta) const {
  if (iu_.empty()) return 0.0;
  const TrigBasis b = ith1_.basis(s);
  const double e2 = eps * eps;
  double acc = 0, pw = e2;  // U-terms start at eps^2
  for (std::size_t j = 0; j < iu_.size(); ++j) {
    double val = 0;
    for (int m = (int)iu_[j].size() - 1; m >= 0; --m)
      val = val * zeta + iu_[j][m].eval(b);
    acc += pw * val;
    pw *= e2;
  }
  return acc;
}

double Expansion::eigenfunction(double eps, const Vec2& x) const {
  const Resolved r = resolve(x);
  if (r.deep || r.tau >= chi_.delta()) return 1.0;
  const double c = chi_.value(r.tau);
  if (c == 0.0) return 1.0;
  const double zeta = r.tau / (eps * eps);
  const double th1 = ith1_.eval(r.s);
  return 1.0 - c * std::exp(th1 * zeta) * layer_sum_phi(eps, r.s, zeta);
}

double Expansion::mean_exit_time(const ScalarSet& sc, const Vec2& x) const {
  const double K = sc.k_total.value_checked("mean exit time evaluation");
  const Resolved r = resolve(x);
  if (r.deep || r.tau >= chi_.delta()) return K;
  const double c = chi_.value(r.tau);
  if (c == 0.0) return K;
  const double zeta = r.tau / (sc.eps * sc.eps);
  const double th1 = ith1_.eval(r.s);
  const double grow = c * std::exp(th1 * zeta);
  const double psi = 1.0 - grow * layer_sum_phi(sc.eps, r.s, zeta);
  return K * psi + grow * layer_sum_u(sc.eps, r.s, zeta);
}

double Expansion::mean_exit_time(double eps, const Vec2& x) const {
  return mean_exit_time(scalars(eps), x);
}

double Expansion::psi_grid(double eps, int q, double tau) const {
  const double c = chi_.value(tau);
  if (c == 0.0) return 1.0;
  const double e2 = eps * eps;
  const double zeta = tau / e2;
  double acc = 0, pw = 1;
  for (std::size_t j = 0; j < phis_.size(); ++j) {
    acc += pw * phis_[j].poly(q, zeta);
    pw *= e2;
  }
  return 1.0 - c * std::exp(traces_.theta[1][q] * zeta) * acc;
}

double Expansion::u_grid(const ScalarSet& sc, int q, double tau) const {
  const double K = sc.k_total.value_checked("collar exit-time evaluation");
  const double c = chi_.value(tau);
  if (c == 0.0) return K;
  const double e2 = sc.eps * sc.eps;
  const double zeta = tau / e2;
  double acc = 0, pw = 1;
  for (std::size_t j = 0; j < phis_.size(); ++j) {
    acc += pw * phis_[j].poly(q, zeta);
    pw *= e2;
  }
  double accu = 0;
  pw = e2;
  for (int j = 1; j <= order_; ++j) {
    accu += pw * us_[j - 1].poly(q, zeta);
    pw *= e2;
  }
  const double grow = c * std::exp(traces_.theta[1][q] * zeta);
  return K * (1.0 - grow * acc) + grow * accu;
}

LogScalar Expansion::torsional_rigidity(const ScalarSet& sc) const {
  const int m = curve_.grid_size();
  const double hs = curve_.length() / m;
  const double e2 = sc.eps * sc.eps;
  const std::vector<double>& th1 = traces_.theta[1];
  const std::vector<double>& kap = curve_.samples().kappa;

  // contribution of the layer corrections to the integral of u, written with
  // full-line zeta moments and the first-order area element 1 - tau kappa
  auto moment_part = [&](const LayerPolynomial& p) {
    const std::vector<double> m0 = layer_zeta_moment(p, 0, th1);
    const std::vector<double> m1 = layer_zeta_moment(p, 1, th1);
    double acc = 0;
    for (int q = 0; q < m; ++q) acc += m0[q] - e2 * kap[q] * m1[q];
    return acc * hs;
  };

  double acc_phi = 0, acc_u = 0, pw = e2;
  for (int j = 0; j <= order_; ++j) {
    acc_phi += pw * moment_part(phis_[j]);
    if (j >= 1) acc_u += pw * moment_part(us_[j - 1]);
    pw *= e2;
  }
  return sc.k_total * LogScalar::from_value(curve_.area() - acc_phi) +
         LogScalar::from_value(acc_u);
}

double Expansion::torsional_direct(const ScalarSet& sc) const {
  const double K = sc.k_total.value_checked("torsional quadrature");
  const int m = curve_.grid_size();
  const double hs = curve_.length() / m;
  const double tau0 = curve_.collar_depth();
  const std::vector<double>& kap = curve_.samples().kappa;

  double collar = 0, collar_area = 0;
  for (int q = 0; q < m; ++q) {
    auto f = [&](double tau) { return u_grid(sc, q, tau) * (1.0 - tau * kap[q]); };
    collar += gauss_kronrod<double, 15>::integrate(f, 0.0, tau0, 10, 1e-9);
    collar_area += tau0 - 0.5 * tau0 * tau0 * kap[q];  // exact strip area
  }
  collar *= hs;
  collar_area *= hs;
  return collar + K * (curve_.area() - collar_area);
}

Expansion::MaxExit Expansion::max_exit_time(const ScalarSet& sc) const {
  MaxExit out;
  out.k_value = sc.k_total.value_checked("exit-time maximum");

  // one deep sample (the evaluator is constant K there)
  Vec2 deep_pt{0, 0};
  out.grid_max = mean_exit_time(sc, deep_pt);
  out.argmax = deep_pt;
  out.tau_at_max = curve_.locate(deep_pt).tau;

  const int m = curve_.grid_size();
  const int qstep = std::max(1, m / 128);
  const double tau0 = curve_.collar_depth();
  const int nt = 25;
  for (int q = 0; q < m; q += qstep) {
    for (int l = 0; l <= nt; ++l) {
      const double tau = tau0 * l / nt;
      const double v = u_grid(sc, q, tau);
      if (v > out.grid_max) {
        out.grid_max = v;
        out.argmax = curve_.collar_point(curve_.samples().s[q], tau);
        out.tau_at_max = tau;
      }
    }
  }
  return out;
}

double Expansion::qsd_normalization(double eps, int angular_factor,
                                    double tol) const {
  if (angular_factor < 1) throw ConfigError("angular_factor must be >= 1");
  const int na = std::max(256, curve_.grid_size()) * angular_factor;
  const double e2 = eps * eps;
  double acc = 0;
  for (int ia = 0; ia < na; ++ia) {
    const double phi = 2.0 * M_PI * ia / na;
    const double cphi = std::cos(phi), sphi = std::sin(phi);
    const double rmax = curve_.radius_at_angle(phi);
    auto f = [&](double r) {
      const Vec2 x{r * cphi, r * sphi};
      return r * std::exp(-pot_.value(x) / e2) * eigenfunction(eps, x);
    };
    acc += gauss_kronrod<double, 15>::integrate(f, 0.0, rmax, 12, tol);
  }
  return acc * (2.0 * M_PI / na);
}

double Expansion::qsd_density(double eps, const Vec2& x,
                              double normalization) const {
  if (!(normalization > 0))
    throw NumericalError("QSD normalization must be positive");
  const double e2 = eps * eps;
  return std::exp(-pot_.value(x) / e2) * eigenfunction(eps, x) / normalization;
}

std::vector<double> Expansion::exit_law_density(double eps,
                                                bool* negative_flagged) const {
  const int m = curve_.grid_size();
  const double e2 = eps * eps;
  const std::vector<double>& th1 = traces_.theta[1];
  std::vector<double> num(m, 0.0);
  bool neg = false;
  for (int q = 0; q < m; ++q) {
    // outward normal-derivative factor of the layer sum at zeta = 0
    double slope = 0, pw = 1;
    for (std::size_t j = 0; j < phis_.size(); ++j) {
      const double c0 = phis_[j].coeff[0][q];
      const double c1 = phis_[j].degree() >= 1 ? phis_[j].coeff[1][q] : 0.0;
      slope += pw * (c1 + th1[q] * c0);
      pw *= e2;
    }
    const double w = std::exp(-(traces_.theta[0][q] - traces_.theta_min) / e2);
    num[q] = -w * slope;
    if (num[q] < 0) neg = true;
  }
  if (negative_flagged) *negative_flagged = neg;
  double total = 0;
  for (double v : num) total += v;
  total *= curve_.length() / m;
  if (!(std::fabs(total) > 0))
    throw NumericalError("exit-law normalization vanished");
  for (double& v : num) v /= total;
  return num;
}

double Expansion::exit_expectation(double eps,
                                   const std::vector<double>& f) const {
  const int m = curve_.grid_size();
  if ((int)f.size() != m)
    throw ConfigError("boundary function must be sampled on the curve grid");
  const std::vector<double> density = exit_law_density(eps);
  double acc = 0;
  for (int q = 0; q < m; ++q) acc += f[q] * density[q];
  return acc * (curve_.length() / m);
}

}  // namespace exitwell
