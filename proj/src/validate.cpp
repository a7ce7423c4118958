#include "exitwell/validate.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>
#include <thread>

#include "exitwell/errors.hpp"

namespace exitwell {

using boost::math::quadrature::gauss_kronrod;

namespace {

// Thomas algorithm for a tridiagonal system; diag/rhs are overwritten.
// lower[i] multiplies x[i-1] in row i, upper[i] multiplies x[i+1].
std::vector<double> thomas_solve(std::vector<double> lower,
                                 std::vector<double> diag,
                                 std::vector<double> upper,
                                 std::vector<double> rhs) {
  const int n = (int)diag.size();
  for (int i = 1; i < n; ++i) {
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  if (std::fabs(diag[n - 1]) < 1e-300)
    throw NumericalError("tridiagonal solve hit a vanishing pivot");
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (int i = n - 2; i >= 0; --i) x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
  return x;
}

}  // namespace

RadialBvpResult radial_bvp(const Potential& pot, double R, double eps,
                           int grid_size) {
  if (!pot.is_radial())
    throw ConfigError("radial solver requires a radially symmetric potential");
  if (!(R > 0) || !(eps > 0)) throw ConfigError("radial solver needs R, eps > 0");
  if (grid_size < 16) throw ConfigError("radial solver needs >= 16 intervals");

  const int n = grid_size;
  std::vector<double> r(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double xi = (double)i / n;
    r[i] = R * (1.0 - (1.0 - xi) * (1.0 - xi));  // quadratic boundary grading
  }

  // the eps^2-thick boundary layer must actually be resolved
  const double e2 = eps * eps;
  int in5 = 0, in1 = 0;
  for (int i = 0; i <= n; ++i) {
    if (r[i] >= R - 5 * e2) ++in5;
    if (r[i] >= R - e2) ++in1;
  }
  if (in5 < 20 || in1 < 5) {
    const int suggest = (int)std::ceil(20.0 * R / e2);
    throw ConfigError(
        "radial grid too coarse for this eps: need >= 20 nodes within 5 eps^2 "
        "of the boundary and >= 5 within eps^2 (try grid_size >= " +
        std::to_string(suggest) + ")");
  }

  // rows 0..n-1 unknown (u_n = 0 Dirichlet); -eps^2(u'' + u'/r) + V' u' = 1
  std::vector<double> lo(n, 0.0), di(n, 0.0), up(n, 0.0), rhs(n, 1.0);
  {
    // r = 0: symmetry gives u'(0) = 0 and Delta u -> 2 u''(0)
    const double h1 = r[1] - r[0];
    di[0] = 4.0 * e2 / (h1 * h1);
    up[0] = -4.0 * e2 / (h1 * h1);
  }
  for (int i = 1; i < n; ++i) {
    const double hm = r[i] - r[i - 1], hp = r[i + 1] - r[i];
    const double denom = hm * hp * (hm + hp);
    // second-order nonuniform stencils
    const double am = 2.0 * hp / denom, ac = -2.0 * (hm + hp) / denom,
                 ap = 2.0 * hm / denom;                       // u''
    const double bm = -hp * hp / denom, bp = hm * hm / denom;  // u'
    const double bc = (hp * hp - hm * hm) / denom;
    const double drift = pot.radial_d1(r[i]);
    lo[i] = -e2 * (am + bm / r[i]) + drift * bm;
    di[i] = -e2 * (ac + bc / r[i]) + drift * bc;
    up[i] = -e2 * (ap + bp / r[i]) + drift * bp;
    if (i == n - 1) up[i] = 0.0;  // u_n = 0 folded in
  }

  RadialBvpResult out;
  out.u = thomas_solve(lo, di, up, rhs);
  out.u.push_back(0.0);
  out.r = std::move(r);
  out.u0 = out.u[0];

  // the radial exit time decreases strictly from the center; a violation
  // means the grid is unusable for this eps
  const double slack = 1e-8 * std::fabs(out.u0);
  for (int i = 0; i + 1 <= n; ++i)
    if (out.u[i + 1] > out.u[i] + slack)
      throw NumericalError("radial profile is not monotone; refine the grid");
  return out;
}

double exact_disk_quadratic_u(double r, double R, double eps) {
  const double e2 = eps * eps;
  const double a = r * r / (2 * e2), b = R * R / (2 * e2);
  auto f = [](double t) { return t == 0.0 ? 1.0 : std::expm1(t) / t; };
  return 0.5 * gauss_kronrod<double, 15>::integrate(f, a, b, 15, 1e-13);
}

double exact_disk_quadratic_u0(double eps) {
  return exact_disk_quadratic_u(0.0, 1.0, eps);
}

RadialEigenResult radial_eigen(const Potential& pot, double R, double eps,
                               int cells) {
  if (!pot.is_radial())
    throw ConfigError("radial eigensolver requires a radial potential");
  if (cells < 32) throw ConfigError("radial eigensolver needs >= 32 cells");
  const int M = cells;
  const double h = R / M, e2 = eps * eps;

  std::vector<double> r(M), main(M, 0.0), off(M - 1, 0.0);
  for (int i = 0; i < M; ++i) r[i] = (i + 0.5) * h;

  // symmetrized operator on psi = u sqrt(r):
  //   -(eps^2/r) (r psi')' + W psi,  W = V'^2/(4 eps^2) - (V'' + V'/r)/2
  for (int i = 0; i < M; ++i) {
    const double face_l = i * h;                     // flux face radii
    const double face_r = (i + 1) * h;
    const double cl = face_l / h;
    double cr = face_r / h;
    if (i == M - 1) cr = 2.0 * R / h;  // Dirichlet ghost at half-cell distance
    const double d1 = pot.radial_d1(r[i]), d2 = pot.radial_d2(r[i]);
    const double W = d1 * d1 / (4 * e2) - 0.5 * (d2 + d1 / r[i]);
    main[i] = e2 * (cl + cr) / (r[i] * h) + W;
    if (i < M - 1) off[i] = -e2 * face_r / (h * h * std::sqrt(r[i] * r[i + 1]));
  }

  // inverse iteration with zero shift
  std::vector<double> psi(M);
  for (int i = 0; i < M; ++i)
    psi[i] = std::sqrt(r[i]) * std::exp(-pot.radial_value(r[i]) / (2 * e2));
  auto apply = [&](const std::vector<double>& v) {
    std::vector<double> w(M);
    for (int i = 0; i < M; ++i) {
      w[i] = main[i] * v[i];
      if (i > 0) w[i] += off[i - 1] * v[i - 1];
      if (i < M - 1) w[i] += off[i] * v[i + 1];
    }
    return w;
  };

  std::vector<double> lo(M, 0.0), up(M, 0.0);
  for (int i = 1; i < M; ++i) lo[i] = off[i - 1];
  for (int i = 0; i + 1 < M; ++i) up[i] = off[i];

  // attainable residual scales with the operator norm, not with lambda
  double op_scale = 0;
  for (int i = 0; i < M; ++i) {
    double row = std::fabs(main[i]);
    if (i > 0) row += std::fabs(off[i - 1]);
    if (i < M - 1) row += std::fabs(off[i]);
    op_scale = std::max(op_scale, row);
  }

  RadialEigenResult out;
  double lambda_prev = 0;
  for (int it = 1; it <= 500; ++it) {
    std::vector<double> next = thomas_solve(lo, main, up, psi);
    double nrm = 0;
    for (double v : next) nrm += v * v;
    nrm = std::sqrt(nrm);
    if (!(nrm > 0)) throw NumericalError("inverse iteration collapsed");
    for (double& v : next) v /= nrm;

    const std::vector<double> hv = apply(next);
    double num = 0;
    for (int i = 0; i < M; ++i) num += next[i] * hv[i];
    const double lambda = num;  // next is unit-norm

    psi = next;
    out.iterations = it;
    if (it > 1 && std::fabs(lambda - lambda_prev) <=
                      1e-14 * std::fabs(lambda) + 1e-300) {
      double resid = 0;
      for (int i = 0; i < M; ++i) {
        const double d = hv[i] - lambda * psi[i];
        resid += d * d;
      }
      if (std::sqrt(resid) > 1e-8 * op_scale)
        throw NumericalError("eigen residual failed to converge");
      out.lambda = lambda;
      out.r = std::move(r);
      out.v = std::move(psi);
      return out;
    }
    lambda_prev = lambda;
  }
  throw NumericalError("inverse iteration did not converge in 500 sweeps");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// one path's state: engine plus a cached second Box-Muller deviate
struct PathRng {
  std::mt19937_64 eng;
  double spare = 0;
  bool has_spare = false;

  explicit PathRng(std::uint64_t s) : eng(s) {}

  double uniform() {  // open (0,1)
    return ((eng() >> 11) + 0.5) * 0x1p-53;
  }
  double gaussian() {
    if (has_spare) {
      has_spare = false;
      return spare;
    }
    const double u1 = uniform(), u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * M_PI * u2;
    spare = rad * std::sin(ang);
    has_spare = true;
    return rad * std::cos(ang);
  }
};

}  // namespace

McResult mc_exit(const Potential& pot, const DomainCurve& curve, double eps,
                 const Vec2& x0, const McSettings& settings) {
  if (settings.n_paths <= 0) throw ConfigError("n_paths must be positive");
  if (!(settings.dt > 0)) throw ConfigError("dt must be positive");
  if (settings.angle_bins <= 0) throw ConfigError("angle_bins must be positive");
  if (curve.locate(x0).status == CollarStatus::Exterior)
    throw ConfigError("Monte Carlo start point lies outside the domain");

  const long long n = settings.n_paths;
  const double dt = settings.dt;
  const double noise = std::sqrt(2.0 * dt) * eps;
  const double rmin2 = curve.min_radius() * curve.min_radius();
  const double rmax2 = curve.max_radius() * curve.max_radius();
  const bool circular =
      curve.max_radius() - curve.min_radius() <= 1e-12 * curve.max_radius();

  std::vector<double> times(n);
  std::vector<int> bins(n);
  std::vector<long long> steps_taken(n);
  std::vector<char> capped(n, 0);

  auto run_range = [&](long long lo, long long hi) {
    for (long long p = lo; p < hi; ++p) {
      PathRng rng(splitmix64(settings.seed + 0x9e3779b97f4a7c15ULL * (p + 1)));
      Vec2 y = x0;
      long long step = 0;
      bool exited = false;
      while (step < settings.max_steps_per_path) {
        const Vec2 g = pot.gradient(y);
        y.x += -g.x * dt + noise * rng.gaussian();
        y.y += -g.y * dt + noise * rng.gaussian();
        ++step;
        const double rr = y.x * y.x + y.y * y.y;
        if (rr < rmin2) continue;
        if (circular || rr > rmax2 ||
            curve.locate(y).status == CollarStatus::Exterior) {
          exited = true;
          break;
        }
      }
      times[p] = step * dt;
      steps_taken[p] = step;
      capped[p] = exited ? 0 : 1;
      const double phi = std::atan2(y.y, y.x);
      int b = (int)((phi + M_PI) / (2.0 * M_PI) * settings.angle_bins);
      bins[p] = std::clamp(b, 0, settings.angle_bins - 1);
    }
  };

  int nthreads = settings.threads > 0
                     ? settings.threads
                     : (int)std::max(1u, std::thread::hardware_concurrency());
  nthreads = (int)std::min<long long>(nthreads, n);
  if (nthreads <= 1) {
    run_range(0, n);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) {
      const long long lo = n * t / nthreads, hi = n * (t + 1) / nthreads;
      pool.emplace_back(run_range, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  // serial reduction in path order: identical for every thread count
  McResult out;
  out.n_paths = n;
  out.dt = dt;
  out.seed = settings.seed;
  out.angle_histogram.assign(settings.angle_bins, 0);
  double mean = 0;
  for (long long p = 0; p < n; ++p) {
    mean += times[p];
    out.total_steps += steps_taken[p];
    out.angle_histogram[bins[p]] += 1;
    if (capped[p]) out.budget_exceeded = true;
  }
  mean /= n;
  double ss = 0;
  for (long long p = 0; p < n; ++p) {
    const double d = times[p] - mean;
    ss += d * d;
  }
  out.mean = mean;
  out.stderr_ = n > 1 ? std::sqrt(ss / ((double)n * (n - 1))) : 0.0;
  return out;
}

}  // namespace exitwell
