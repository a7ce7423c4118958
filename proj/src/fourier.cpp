#include "exitwell/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "exitwell/errors.hpp"

namespace exitwell {

namespace {
// FFTW's planner is not thread-safe; execution of a ready plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

std::vector<std::complex<double>> real_fft(const std::vector<double>& samples) {
  const int m = static_cast<int>(samples.size());
  if (m < 2) throw NumericalError("real_fft: need at least 2 samples");
  std::vector<double> in(samples);
  std::vector<std::complex<double>> out(m / 2 + 1);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_plan plan = fftw_plan_dft_r2c_1d(
        m, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
        FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
  }
  return out;
}

std::vector<double> real_ifft(const std::vector<std::complex<double>>& spectrum,
                              int m) {
  if (static_cast<int>(spectrum.size()) != m / 2 + 1)
    throw NumericalError("real_ifft: spectrum size does not match m");
  std::vector<std::complex<double>> in(spectrum);
  std::vector<double> out(m);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_plan plan = fftw_plan_dft_c2r_1d(
        m, reinterpret_cast<fftw_complex*>(in.data()), out.data(),
        FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
  }
  for (double& v : out) v /= m;
  return out;
}

std::vector<double> spectral_derivative(const std::vector<double>& samples,
                                        double period) {
  const int m = static_cast<int>(samples.size());
  if (period <= 0) throw NumericalError("spectral_derivative: period <= 0");
  auto spec = real_fft(samples);
  const double w = 2.0 * M_PI / period;
  // multiply bin k by i·k·w; drop the Nyquist bin (its derivative is
  // ambiguous for real data and the symmetric choice is zero).
  for (int k = 0; k < static_cast<int>(spec.size()); ++k) {
    const double kk = (2 * k == m) ? 0.0 : k * w;
    spec[k] *= std::complex<double>(0.0, kk);
  }
  return real_ifft(spec, m);
}

TrigInterp::TrigInterp(const std::vector<double>& samples, double period)
    : m_(static_cast<int>(samples.size())), period_(period) {
  if (m_ < 2) throw NumericalError("TrigInterp: need at least 2 samples");
  if (period_ <= 0) throw NumericalError("TrigInterp: period <= 0");
  auto spec = real_fft(samples);
  const int h = m_ / 2;
  a_.assign(h + 1, 0.0);
  b_.assign(h + 1, 0.0);
  a_[0] = spec[0].real() / m_;
  for (int k = 1; k < h; ++k) {
    a_[k] = 2.0 * spec[k].real() / m_;
    b_[k] = -2.0 * spec[k].imag() / m_;
  }
  if (2 * h == m_) {
    a_[h] = spec[h].real() / m_;  // Nyquist cosine only
  } else {
    a_[h] = 2.0 * spec[h].real() / m_;
    b_[h] = -2.0 * spec[h].imag() / m_;
  }
}

TrigBasis TrigInterp::basis(double s) const {
  TrigBasis b;
  b.s = s;
  const int h = m_ / 2;
  b.cosk.resize(h + 1);
  b.sink.resize(h + 1);
  const double w = 2.0 * M_PI / period_;
  for (int k = 0; k <= h; ++k) {
    b.cosk[k] = std::cos(k * w * s);
    b.sink[k] = std::sin(k * w * s);
  }
  return b;
}

double TrigInterp::eval(const TrigBasis& bb) const {
  const int h = m_ / 2;
  double acc = 0.0;
  for (int k = h; k >= 0; --k) acc += a_[k] * bb.cosk[k] + b_[k] * bb.sink[k];
  return acc;
}

double TrigInterp::derivative(const TrigBasis& bb) const {
  const int h = m_ / 2;
  const double w = 2.0 * M_PI / period_;
  double acc = 0.0;
  // Nyquist derivative zeroed, matching spectral_derivative.
  const int top = (2 * h == m_) ? h - 1 : h;
  for (int k = top; k >= 1; --k)
    acc += k * w * (b_[k] * bb.cosk[k] - a_[k] * bb.sink[k]);
  return acc;
}

}  // namespace exitwell
