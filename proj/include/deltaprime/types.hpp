#pragma once

#include <complex>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace deltaprime {

using Complex = std::complex<double>;

/// Raised when a scenario or input fails a structural precondition.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when a numerical guard trips (diagonal degeneracy, boundary mass,
/// oscillation resolution, memory budget). Distinct from ValidationError so
/// callers can map it to a dedicated exit code.
struct NumericalGuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace constants {

inline constexpr double pi = 3.14159265358979323846;

/// Principal branch throughout: sqrt(z) = |z|^{1/2} e^{i arg(z)/2}, arg in (-pi, pi].
inline Complex sqrt_i() { return std::polar(1.0, pi / 4.0); }

/// sqrt(4i) = 2 e^{i pi/4}.
inline Complex sqrt_4i() { return std::polar(2.0, pi / 4.0); }

/// sqrt(pi*i) = sqrt(pi) e^{i pi/4}.
inline Complex sqrt_pi_i() { return std::polar(std::sqrt(pi), pi / 4.0); }

/// (pi*i)^{-1/2} = e^{-i pi/4}/sqrt(pi).
inline Complex inv_sqrt_pi_i() { return std::polar(1.0 / std::sqrt(pi), -pi / 4.0); }

/// (4i)^{-1/2} = e^{-i pi/4}/2.
inline Complex inv_sqrt_4i() { return std::polar(0.5, -pi / 4.0); }

}  // namespace constants

/// Half-sign step: sgn(x)/2 with the midpoint convention at the origin.
inline double half_sign(double x) {
  if (x > 0.0) return 0.5;
  if (x < 0.0) return -0.5;
  return 0.0;
}

/// Sampled complex signal; nodes and values must have equal length.
struct ComplexSignal {
  std::vector<double> nodes;
  std::vector<Complex> values;

  bool consistent() const {
    if (nodes.size() != values.size()) return false;
    for (double t : nodes)
      if (!std::isfinite(t)) return false;
    for (const Complex& v : values)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }
};

inline bool all_finite(const std::vector<Complex>& v) {
  for (const Complex& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

}  // namespace deltaprime
