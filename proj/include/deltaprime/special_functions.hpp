#pragma once

/// Closed-form kernels built from the Fresnel-type integral F(z) = int_0^z e^{iu^2} du:
/// the free propagator kernel, the freely evolved half-sign step, its slope at the
/// origin and its time derivative.

#include <cmath>
#include <complex>
#include <limits>

#include "deltaprime/types.hpp"

namespace deltaprime {

namespace detail {

/// Switch point between the power series and the large-argument evaluation.
inline constexpr double fresnel_switch = 4.0;

/// Power series F(z) = z * sum_k (i z^2)^k / (k! (2k+1)); compensated summation
/// keeps the cancellation loss near the switch point below ~1e-12.
inline Complex fresnel_series(double z) {
  const Complex iz2(0.0, z * z);
  Complex term(1.0, 0.0);
  Complex sum(1.0, 0.0);
  Complex comp(0.0, 0.0);
  for (int k = 1; k < 200; ++k) {
    term *= iz2 / static_cast<double>(k);
    const Complex add = term / static_cast<double>(2 * k + 1);
    // Kahan step
    const Complex y = add - comp;
    const Complex t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (std::abs(add) < 1e-18 * std::abs(sum)) break;
  }
  return z * sum;
}

/// Tail T(z) = int_z^inf e^{iu^2} du for z > 0 via the continued fraction of the
/// upper incomplete gamma function: T(z) = (z/2) e^{iz^2} * CF(w), w = -i z^2,
/// CF truncations are rational in 1/z^2. Modified Lentz iteration.
inline Complex fresnel_tail_cf(double z) {
  const double a = 0.5;
  const Complex w(0.0, -z * z);
  const double tiny = 1e-290;
  Complex b = w + (1.0 - a);
  Complex c(1.0 / tiny, 0.0);
  Complex d = 1.0 / b;
  Complex f = d;
  for (int n = 1; n < 300; ++n) {
    const double an = -n * (n - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const Complex delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 0.5 * z * std::exp(Complex(0.0, z * z)) * f;
}

/// Poincare expansion T(z) ~ (i e^{iz^2}/(2z)) [1 + sum_m (2m-1)!!/(2iz^2)^m],
/// truncated at the first term below 4e-17; adequate for z >= 8.
inline Complex fresnel_tail_asymptotic(double z) {
  const Complex inv2iz2 = 1.0 / Complex(0.0, 2.0 * z * z);
  Complex term(1.0, 0.0);
  Complex sum(1.0, 0.0);
  for (int m = 1; m < 80; ++m) {
    term *= static_cast<double>(2 * m - 1) * inv2iz2;
    sum += term;
    if (std::abs(term) < 4e-17) break;
  }
  return Complex(0.0, 1.0 / (2.0 * z)) * std::exp(Complex(0.0, z * z)) * sum;
}

}  // namespace detail

/// T(z) = int_z^infty e^{iu^2} du, z >= 0.
inline Complex fresnel_tail(double z) {
  if (z < 0.0) throw std::invalid_argument("fresnel_tail: z must be nonnegative");
  if (z <= detail::fresnel_switch) return 0.5 * constants::sqrt_pi_i() - detail::fresnel_series(z);
  if (z < 8.0) return detail::fresnel_tail_cf(z);
  return detail::fresnel_tail_asymptotic(z);
}

/// F(z) = int_0^z e^{iu^2} du. Odd in z by construction (bitwise).
inline Complex fresnel(double z) {
  const double az = std::abs(z);
  Complex f;
  if (az <= detail::fresnel_switch) {
    f = detail::fresnel_series(az);
  } else {
    f = 0.5 * constants::sqrt_pi_i() - fresnel_tail(az);
  }
  return std::signbit(z) ? -f : f;
}

/// Free propagator kernel e^{ix^2/(4t)} / sqrt(4 pi i t), t > 0.
inline Complex free_kernel(double t, double x) {
  if (!(t > 0.0)) throw std::invalid_argument("free_kernel: t must be positive");
  const double mag = 1.0 / (2.0 * std::sqrt(constants::pi * t));
  return std::polar(mag, x * x / (4.0 * t) - constants::pi / 4.0);
}

/// Free evolution of the half-sign step: (pi i)^{-1/2} F(x/(2 sqrt(t))), t > 0.
/// Odd in x; tends to sgn(x)/2 pointwise as x -> +-inf and as t -> 0+.
inline Complex evolved_step(double t, double x) {
  if (!(t > 0.0)) throw std::invalid_argument("evolved_step: t must be positive");
  return constants::inv_sqrt_pi_i() * fresnel(x / (2.0 * std::sqrt(t)));
}

/// Slope of the evolved step at the origin: (4 pi i t)^{-1/2}, t > 0.
inline Complex evolved_step_slope_at_zero(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("evolved_step_slope_at_zero: t must be positive");
  return std::polar(1.0 / (2.0 * std::sqrt(constants::pi * t)), -constants::pi / 4.0);
}

/// Time derivative of the evolved step:
///   -(1/2) (4 pi i)^{-1/2} x t^{-3/2} e^{ix^2/(4t)},  t > 0.
inline Complex evolved_step_dt(double t, double x) {
  if (!(t > 0.0)) throw std::invalid_argument("evolved_step_dt: t must be positive");
  const Complex pref = std::polar(1.0 / (4.0 * std::sqrt(constants::pi)), -constants::pi / 4.0);
  return -pref * x / (t * std::sqrt(t)) * std::exp(Complex(0.0, x * x / (4.0 * t)));
}

}  // namespace deltaprime
