#pragma once
#include <stdexcept>
#include <string>

namespace exitwell {

// Bad input: unparsable config file, wrong parameter combination, misuse of an
// oracle precondition.  The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A standing model assumption is violated by the supplied data (potential not
// single-well, boundary trace with the wrong sign, ...).  Exit code 2.
class AssumptionError : public std::runtime_error {
 public:
  explicit AssumptionError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical machinery failed: non-convergent iteration, unrepresentable
// magnitude, quadrature breakdown.  Exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace exitwell
