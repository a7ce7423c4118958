#pragma once
#include <cstdint>
#include <vector>

#include "exitwell/geometry.hpp"
#include "exitwell/potential.hpp"

namespace exitwell {

// -- radial finite-difference oracle ----------------------------------------

// Mean exit time of the radially symmetric problem on a disk of radius R:
//   eps^2 (u'' + u'/r) - V'(r) u' = -1,  u'(0) = 0,  u(R) = 0,
// solved on a boundary-graded grid (nodes cluster quadratically near r = R so
// the eps^2-wide layer is resolved).  grid_size counts intervals.
struct RadialBvpResult {
  std::vector<double> r, u;
  double u0 = 0;  // value at the center
};
RadialBvpResult radial_bvp(const Potential& pot, double R, double eps,
                           int grid_size);

// Closed-form references for V = |x|^2/2 on the disk of radius R:
//   u(r) = 1/2 * integral_{r^2/2eps^2}^{R^2/2eps^2} expm1(t)/t dt.
double exact_disk_quadratic_u(double r, double R, double eps);
double exact_disk_quadratic_u0(double eps);  // R = 1

// -- radial eigenvalue oracle -----------------------------------------------

// Principal Dirichlet eigenvalue of eps^2 Delta - grad V . grad on the disk,
// radial sector, via the symmetrized finite-volume matrix (unknown u sqrt(r)
// on cell centers) and inverse iteration.
struct RadialEigenResult {
  double lambda = 0;
  std::vector<double> r, v;  // cell centers and (unnormalized) eigenvector
  int iterations = 0;
};
RadialEigenResult radial_eigen(const Potential& pot, double R, double eps,
                               int cells);

// -- Monte Carlo oracle -----------------------------------------------------

struct McSettings {
  long long n_paths = 1000;
  double dt = 1e-4;
  std::uint64_t seed = 1;
  long long max_steps_per_path = 50'000'000;
  int threads = 0;  // 0 = hardware concurrency
  int angle_bins = 36;
};

struct McResult {
  long long n_paths = 0;
  double dt = 0;
  double mean = 0;
  double stderr_ = 0;  // standard error of the mean
  std::vector<long long> angle_histogram;  // exit angles, atan2 bins
  std::uint64_t seed = 0;
  long long total_steps = 0;
  bool budget_exceeded = false;  // some path was stopped at the step cap
};

// Euler-Maruyama simulation of dX = -grad V dt + sqrt(2) eps dW started at
// x0, stopped at the first step that leaves the domain.  Per-path RNG streams
// are derived from (seed, path index), so results are bit-identical for any
// thread count.
McResult mc_exit(const Potential& pot, const DomainCurve& curve, double eps,
                 const Vec2& x0, const McSettings& settings);

}  // namespace exitwell
