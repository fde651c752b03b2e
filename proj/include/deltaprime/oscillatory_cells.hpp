#pragma once

/// Exact cell integrals of tau^{p/2} e^{i x^2/(4 tau)} and of the evolved-step
/// kernel against piecewise-linear densities. Substituting u = |x|/(2 sqrt(tau))
/// turns every antiderivative into Fresnel-tail expressions, so the endpoint
/// tau -> 0, where the phase oscillates infinitely fast, is handled in closed
/// form. All integrals here are in |x|; callers apply odd symmetry.

#include <cmath>

#include "deltaprime/special_functions.hpp"
#include "deltaprime/types.hpp"

namespace deltaprime::osc {

/// One tau-edge: u = ax/(2 sqrt(tau)), E = e^{iu^2}, T = fresnel_tail(u).
/// tau == 0 is the u -> infinity limit where every E/u^k and T vanish.
struct Edge {
  double tau = 0.0;
  bool origin = true;
  double inv_u = 0.0;
  Complex E{0.0, 0.0};
  Complex T{0.0, 0.0};
};

inline Edge make_edge(double ax, double tau) {
  Edge e;
  e.tau = tau;
  if (tau <= 0.0) return e;
  e.origin = false;
  const double u = ax / (2.0 * std::sqrt(tau));
  e.inv_u = 1.0 / u;
  e.E = std::exp(Complex(0.0, u * u));
  e.T = fresnel_tail(u);
  return e;
}

namespace detail {

// Antiderivatives of tau^{p/2} e^{i ax^2/(4 tau)}, normalized to vanish at tau = 0.
inline Complex anti_m12(const Edge& e, double ax) {  // p = -1/2
  if (e.origin) return {0.0, 0.0};
  return ax * (e.E * e.inv_u + Complex(0.0, 2.0) * e.T);
}

inline Complex anti_p12(const Edge& e, double ax) {  // p = +1/2
  if (e.origin) return {0.0, 0.0};
  const double x3 = ax * ax * ax;
  const Complex Eu = e.E * e.inv_u;
  const Complex Eu3 = Eu * e.inv_u * e.inv_u;
  return x3 * (Eu3 / 12.0 + Complex(0.0, 1.0 / 6.0) * Eu - e.T / 3.0);
}

inline Complex anti_p32(const Edge& e, double ax) {  // p = +3/2
  if (e.origin) return {0.0, 0.0};
  const double x5 = std::pow(ax, 5);
  const Complex Eu = e.E * e.inv_u;
  const Complex Eu3 = Eu * e.inv_u * e.inv_u;
  const Complex Eu5 = Eu3 * e.inv_u * e.inv_u;
  return x5 * (Eu5 / 80.0 + Complex(0.0, 1.0 / 120.0) * Eu3 - Eu / 60.0 -
               Complex(0.0, 1.0 / 30.0) * e.T);
}

inline Complex fresnel_from_tail(const Edge& e) {
  // F(u) for the edge; at the origin edge u = inf and F = sqrt(pi i)/2.
  return 0.5 * constants::sqrt_pi_i() - e.T;
}

}  // namespace detail

/// int_{lo.tau}^{hi.tau} tau^{-1/2} e^{i ax^2/(4 tau)} dtau; ax == 0 reduces to
/// the plain power integral.
inline Complex int_m12(const Edge& lo, const Edge& hi, double ax) {
  if (ax == 0.0) return {2.0 * (std::sqrt(hi.tau) - std::sqrt(lo.tau)), 0.0};
  return detail::anti_m12(hi, ax) - detail::anti_m12(lo, ax);
}

inline Complex int_p12(const Edge& lo, const Edge& hi, double ax) {
  if (ax == 0.0)
    return {(2.0 / 3.0) * (hi.tau * std::sqrt(hi.tau) - lo.tau * std::sqrt(lo.tau)), 0.0};
  return detail::anti_p12(hi, ax) - detail::anti_p12(lo, ax);
}

inline Complex int_p32(const Edge& lo, const Edge& hi, double ax) {
  if (ax == 0.0)
    return {(2.0 / 5.0) * (hi.tau * hi.tau * std::sqrt(hi.tau) -
                           lo.tau * lo.tau * std::sqrt(lo.tau)),
            0.0};
  return detail::anti_p32(hi, ax) - detail::anti_p32(lo, ax);
}

/// int F(ax/(2 sqrt(tau))) dtau = [tau F] + (ax/4) int tau^{-1/2} E dtau.
inline Complex int_fresnel(const Edge& lo, const Edge& hi, double ax) {
  if (ax == 0.0) return {0.0, 0.0};
  const Complex boundary =
      hi.tau * detail::fresnel_from_tail(hi) - lo.tau * detail::fresnel_from_tail(lo);
  return boundary + 0.25 * ax * int_m12(lo, hi, ax);
}

/// int tau F(ax/(2 sqrt(tau))) dtau = [tau^2 F / 2] + (ax/8) int tau^{1/2} E dtau.
inline Complex int_tau_fresnel(const Edge& lo, const Edge& hi, double ax) {
  if (ax == 0.0) return {0.0, 0.0};
  const Complex boundary = 0.5 * (hi.tau * hi.tau * detail::fresnel_from_tail(hi) -
                                  lo.tau * lo.tau * detail::fresnel_from_tail(lo));
  return boundary + 0.125 * ax * int_p12(lo, hi, ax);
}

}  // namespace deltaprime::osc
