#pragma once
#include <complex>
#include <vector>

namespace exitwell {

// Nonnegative-frequency bins of the DFT of a real sample vector
// (FFTW forward convention, no normalization).  Length m/2 + 1.
std::vector<std::complex<double>> real_fft(const std::vector<double>& samples);

// Inverse of real_fft back to m real samples (normalized by 1/m).
std::vector<double> real_ifft(const std::vector<std::complex<double>>& spectrum,
                              int m);

// Derivative of a smooth periodic function sampled uniformly on [0, period).
// The Nyquist mode is zeroed (the standard convention for real data).
std::vector<double> spectral_derivative(const std::vector<double>& samples,
                                        double period);

// Shared cos/sin table so many interpolants can be evaluated at one point
// without recomputing trigonometry.
struct TrigBasis {
  double s = 0;
  std::vector<double> cosk, sink;  // cos(k·w·s), sin(k·w·s) for k = 0..m/2
};

// Trigonometric interpolant through uniform periodic samples; spectrally
// accurate for smooth data.  Exact (to rounding) at the original grid points.
class TrigInterp {
 public:
  TrigInterp() = default;
  TrigInterp(const std::vector<double>& samples, double period);

  int grid_size() const { return m_; }
  double period() const { return period_; }

  TrigBasis basis(double s) const;
  double eval(const TrigBasis& b) const;
  double derivative(const TrigBasis& b) const;
  double eval(double s) const { return eval(basis(s)); }
  double derivative(double s) const { return derivative(basis(s)); }

 private:
  int m_ = 0;
  double period_ = 0;
  std::vector<double> a_, b_;  // cosine / sine coefficients, k = 0..m/2
};

}  // namespace exitwell
