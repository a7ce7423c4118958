#pragma once
#include <cmath>
#include <limits>

#include "exitwell/errors.hpp"

namespace exitwell {

// Signed magnitude in log space.  Quantities like e^{-theta_min/eps^2} swing
// over hundreds of orders of magnitude across an eps sweep, so every
// exponentially large/small scalar is carried as (sign, log|x|) and only
// materialized into a plain double when representable.
struct LogScalar {
  double logmag = -std::numeric_limits<double>::infinity();
  int sign = 0;  // -1, 0, +1

  static LogScalar zero() { return LogScalar{}; }

  static LogScalar from_value(double v) {
    LogScalar r;
    if (v == 0.0) return r;
    r.sign = v > 0 ? 1 : -1;
    r.logmag = std::log(std::fabs(v));
    return r;
  }

  static LogScalar from_log(double lm, int sg) {
    LogScalar r;
    if (sg == 0) return r;
    r.sign = sg > 0 ? 1 : -1;
    r.logmag = lm;
    return r;
  }

  bool is_zero() const { return sign == 0; }

  // A double can hold exp(x) for |x| up to ~709.
  bool representable() const { return sign == 0 || std::fabs(logmag) < 700.0; }

  double value() const {
    if (sign == 0) return 0.0;
    return sign * std::exp(logmag);
  }

  double value_checked(const char* what) const {
    if (!representable())
      throw NumericalError(std::string(what) +
                           ": magnitude exp(" + std::to_string(logmag) +
                           ") not representable as double");
    return value();
  }

  LogScalar operator-() const { return LogScalar{logmag, -sign}; }

  friend LogScalar operator*(const LogScalar& a, const LogScalar& b) {
    if (a.sign == 0 || b.sign == 0) return zero();
    return LogScalar{a.logmag + b.logmag, a.sign * b.sign};
  }

  friend LogScalar operator/(const LogScalar& a, const LogScalar& b) {
    if (b.sign == 0) throw NumericalError("LogScalar: division by zero");
    if (a.sign == 0) return zero();
    return LogScalar{a.logmag - b.logmag, a.sign * b.sign};
  }

  friend LogScalar operator*(const LogScalar& a, double b) {
    return a * from_value(b);
  }

  // log-sum-exp addition with sign handling.
  friend LogScalar operator+(const LogScalar& a, const LogScalar& b) {
    if (a.sign == 0) return b;
    if (b.sign == 0) return a;
    const LogScalar& big = (a.logmag >= b.logmag) ? a : b;
    const LogScalar& small = (a.logmag >= b.logmag) ? b : a;
    const double d = small.logmag - big.logmag;  // <= 0
    if (a.sign == b.sign)
      return LogScalar{big.logmag + std::log1p(std::exp(d)), big.sign};
    const double m = -std::expm1(d);  // 1 - exp(d) in [0, 1]
    if (m == 0.0) return zero();      // exact cancellation
    return LogScalar{big.logmag + std::log(m), big.sign};
  }

  friend LogScalar operator-(const LogScalar& a, const LogScalar& b) {
    return a + (-b);
  }
};

}  // namespace exitwell
