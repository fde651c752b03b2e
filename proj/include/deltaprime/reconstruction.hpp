#pragma once

/// Rebuilds the regular part phi(t), the full state psi = phi + q * half_sign,
/// the slope field phi_x, and the Hamiltonian action -phi'' on the spatial grid;
/// independent far-field route and the regularized decomposition.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "deltaprime/charge_solver.hpp"
#include "deltaprime/datum.hpp"
#include "deltaprime/free_propagator.hpp"
#include "deltaprime/grids.hpp"
#include "deltaprime/oscillatory_cells.hpp"
#include "deltaprime/special_functions.hpp"
#include "deltaprime/types.hpp"

namespace deltaprime {

/// Quadrature rule for the Duhamel integral int qdot(s) U(t-s)step ds.
///  - trapezoid: bounded Fresnel kernel, endpoint s = t taken as the pointwise
///    limit half_sign(x); introduces a known level jump (h/2) qdot(t) across 0.
///  - product: kernel integrated exactly per cell against piecewise-linear qdot.
enum class DuhamelRule { trapezoid, product };

struct WavefunctionFrame {
  int time_node = 0;
  double t = 0.0;
  Complex q{0.0, 0.0};
  Complex q_dot{0.0, 0.0};
  Complex artifact_jump{0.0, 0.0};  // discrete level jump of phi across 0 (trapezoid rule)
  DuhamelRule rule = DuhamelRule::trapezoid;
  std::vector<Complex> phi, psi;
  std::vector<Complex> h_psi;  // filled by hamiltonian_action
  std::vector<Complex> phi_x;  // filled by reconstruct_phi_x
};

namespace detail {

/// Duhamel integral at one point x for time node n (n >= 1).
inline Complex duhamel_step_at(const ChargeTrajectory& traj, int n, double x, DuhamelRule rule) {
  const double h = traj.grid.step();
  const double t = traj.grid.node(n);
  if (x == 0.0 && rule == DuhamelRule::product) return {0.0, 0.0};
  if (rule == DuhamelRule::trapezoid) {
    Complex acc = 0.5 * traj.q_dot[0] * evolved_step(t, x);
    for (int j = 1; j < n; ++j)
      acc += traj.q_dot[static_cast<std::size_t>(j)] * evolved_step(t - traj.grid.node(j), x);
    acc += 0.5 * traj.q_dot[static_cast<std::size_t>(n)] * half_sign(x);
    return h * acc;
  }
  // product rule: exact Fresnel cell integrals, odd in x
  const double ax = std::abs(x);
  const double sign = x > 0.0 ? 1.0 : -1.0;
  Complex acc(0.0, 0.0);
  osc::Edge hi = osc::make_edge(ax, t);  // tau at s = 0
  for (int j = 0; j < n; ++j) {
    const double b = t - traj.grid.node(j);
    const osc::Edge lo = osc::make_edge(ax, t - traj.grid.node(j + 1));
    const Complex alpha = traj.q_dot[static_cast<std::size_t>(j)];
    const Complex slope =
        (traj.q_dot[static_cast<std::size_t>(j + 1)] - traj.q_dot[static_cast<std::size_t>(j)]) / h;
    acc += (alpha + slope * b) * osc::int_fresnel(lo, hi, ax) -
           slope * osc::int_tau_fresnel(lo, hi, ax);
    hi = lo;
  }
  return sign * constants::inv_sqrt_pi_i() * acc;
}

inline std::vector<Complex> sample_phi0(const InitialDatum& datum, const SpatialGrid& grid) {
  if (datum.has_tabulated()) return datum.tabulated();
  std::vector<Complex> v(static_cast<std::size_t>(grid.n_points()));
  for (int j = 0; j < grid.n_points(); ++j)
    v[static_cast<std::size_t>(j)] = datum.phi0(grid.node(j));
  return v;
}

}  // namespace detail

/// phi(t_n, x) = U(t_n) phi0 - int_0^{t_n} qdot(s) U(t_n - s) step ds on the grid.
/// The free part goes through the spectral propagator; t = 0 returns phi0 samples.
inline std::vector<Complex> reconstruct_phi(const ChargeTrajectory& traj,
                                            const InitialDatum& datum,
                                            const SpectralPropagator& prop, int n,
                                            DuhamelRule rule = DuhamelRule::trapezoid) {
  if (n < 0 || n > traj.grid.n_steps())
    throw ValidationError("reconstruct_phi: time node outside the grid");
  const SpatialGrid& grid = prop.grid();
  auto phi0 = detail::sample_phi0(datum, grid);
  if (n == 0) return phi0;
  if (traj.q_dot.empty()) throw ValidationError("reconstruct_phi: q_dot not populated");
  auto phi = prop.propagate(phi0, traj.grid.node(n));
  for (int j = 0; j < grid.n_points(); ++j)
    phi[static_cast<std::size_t>(j)] -= detail::duhamel_step_at(traj, n, grid.node(j), rule);
  return phi;
}

/// Same reconstruction at a handful of points with the analytic free part
/// (closed-form family only). Used for boundary stencils.
inline std::vector<Complex> reconstruct_phi_at(const ChargeTrajectory& traj,
                                               const InitialDatum& datum, int n,
                                               std::span<const double> xs,
                                               DuhamelRule rule = DuhamelRule::trapezoid) {
  if (datum.has_tabulated())
    throw ValidationError("reconstruct_phi_at: requires a closed-form datum");
  std::vector<Complex> out(xs.size());
  const double t = traj.grid.node(n);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out[i] = (n == 0) ? datum.phi0(xs[i]) : evolve_family(datum, t, xs[i]);
    if (n > 0) out[i] -= detail::duhamel_step_at(traj, n, xs[i], rule);
  }
  return out;
}

/// Slope field phi_x(t_n, x) = (U phi0)'(x) - int qdot(s) K(t-s, x) ds with the
/// free-propagator kernel K; the weakly singular oscillatory endpoint is
/// integrated exactly per cell.
inline std::vector<Complex> reconstruct_phi_x(const ChargeTrajectory& traj,
                                              const InitialDatum& datum,
                                              const SpectralPropagator& prop, int n) {
  const SpatialGrid& grid = prop.grid();
  std::vector<Complex> out(static_cast<std::size_t>(grid.n_points()));
  const double t = traj.grid.node(n);
  if (datum.has_tabulated()) {
    auto free_field = (n == 0) ? detail::sample_phi0(datum, grid)
                               : prop.propagate(detail::sample_phi0(datum, grid), t);
    out = prop.derivative(free_field, 1);
  } else {
    for (int j = 0; j < grid.n_points(); ++j) {
      const double x = grid.node(j);
      out[static_cast<std::size_t>(j)] =
          (n == 0) ? datum.phi0_prime(x) : evolve_family_dx(datum, t, x);
    }
  }
  if (n == 0) return out;
  if (traj.q_dot.empty()) throw ValidationError("reconstruct_phi_x: q_dot not populated");
  const double h = traj.grid.step();
  const Complex kernel_pref = std::polar(0.5 / std::sqrt(constants::pi), -constants::pi / 4.0);
  for (int j = 0; j < grid.n_points(); ++j) {
    const double ax = std::abs(grid.node(j));
    Complex acc(0.0, 0.0);
    osc::Edge hi = osc::make_edge(ax, t);
    for (int c = 0; c < n; ++c) {
      const double b = t - traj.grid.node(c);
      const osc::Edge lo = osc::make_edge(ax, t - traj.grid.node(c + 1));
      const Complex alpha = traj.q_dot[static_cast<std::size_t>(c)];
      const Complex slope = (traj.q_dot[static_cast<std::size_t>(c + 1)] -
                             traj.q_dot[static_cast<std::size_t>(c)]) /
                            h;
      acc += (alpha + slope * b) * osc::int_m12(lo, hi, ax) - slope * osc::int_p12(lo, hi, ax);
      hi = lo;
    }
    out[static_cast<std::size_t>(j)] -= kernel_pref * acc;
  }
  return out;
}

/// psi = phi + q * half_sign, with the midpoint convention at the origin node.
inline std::vector<Complex> assemble_psi(std::span<const Complex> phi, Complex q,
                                         const SpatialGrid& grid) {
  if (phi.size() != static_cast<std::size_t>(grid.n_points()))
    throw ValidationError("assemble_psi: field/grid size mismatch");
  std::vector<Complex> psi(phi.begin(), phi.end());
  for (int j = 0; j < grid.n_points(); ++j)
    psi[static_cast<std::size_t>(j)] += q * half_sign(grid.node(j));
  return psi;
}

/// Builds a frame (phi, psi, charge data, artifact bookkeeping) at node n.
inline WavefunctionFrame make_frame(const ChargeTrajectory& traj, const InitialDatum& datum,
                                    const SpectralPropagator& prop, int n,
                                    DuhamelRule rule = DuhamelRule::trapezoid) {
  WavefunctionFrame fr;
  fr.time_node = n;
  fr.t = traj.grid.node(n);
  fr.q = traj.q[static_cast<std::size_t>(n)];
  fr.q_dot = traj.q_dot.empty() ? Complex(0.0, 0.0) : traj.q_dot[static_cast<std::size_t>(n)];
  fr.rule = rule;
  fr.artifact_jump = (rule == DuhamelRule::trapezoid && n > 0)
                         ? 0.5 * traj.grid.step() * fr.q_dot
                         : Complex(0.0, 0.0);
  fr.phi = reconstruct_phi(traj, datum, prop, n, rule);
  fr.psi = assemble_psi(fr.phi, fr.q, prop.grid());
  return fr;
}

namespace taper {

inline constexpr double analysis_fraction = 0.8;   // flat part of the window
inline constexpr double cutoff_fraction = 0.95;    // window is zero beyond this
inline constexpr double step_width = 2.0;          // smoothing scale of the step model

/// Smooth model of the half-sign step used to remove the non-decaying tail.
inline double smooth_step(double x) { return 0.5 * std::tanh(x / step_width); }

inline double smooth_step_dd(double x) {
  const double th = std::tanh(x / step_width);
  const double sech2 = 1.0 - th * th;
  return -sech2 * th / (step_width * step_width);
}

inline double window(double x, double L) {
  const double a = analysis_fraction * L, b = cutoff_fraction * L;
  const double ax = std::abs(x);
  if (ax <= a) return 1.0;
  if (ax >= b) return 0.0;
  const double u = (ax - a) / (b - a);
  return 1.0 - u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

}  // namespace taper

/// Hamiltonian action H psi = -phi'' by spectral differentiation. The field is
/// first continued to a window-friendly one: the known discrete level jump at
/// the origin is removed, the non-decaying half-sign tail is traded for a smooth
/// step (whose curvature is added back analytically), and the result is tapered
/// to zero before the transform. Values are quantitative on the flat part of
/// the window, |x| <= 0.8 L.
inline std::vector<Complex> hamiltonian_action(const WavefunctionFrame& frame,
                                               const SpectralPropagator& prop) {
  const SpatialGrid& grid = prop.grid();
  const double L = grid.half_width();
  std::vector<Complex> v(static_cast<std::size_t>(grid.n_points()));
  for (int j = 0; j < grid.n_points(); ++j) {
    const double x = grid.node(j);
    v[static_cast<std::size_t>(j)] = (frame.phi[static_cast<std::size_t>(j)] -
                                      frame.artifact_jump * half_sign(x) +
                                      frame.q * taper::smooth_step(x)) *
                                     taper::window(x, L);
  }
  auto dd = prop.derivative(v, 2);
  std::vector<Complex> h(static_cast<std::size_t>(grid.n_points()));
  for (int j = 0; j < grid.n_points(); ++j)
    h[static_cast<std::size_t>(j)] =
        -(dd[static_cast<std::size_t>(j)] - frame.q * taper::smooth_step_dd(grid.node(j)));
  return h;
}

/// 4th-order one-sided slopes at the origin from five nodes on each side,
/// excluding the origin node itself (immune to level jumps across 0).
inline std::pair<Complex, Complex> one_sided_slopes_at_zero(std::span<const Complex> field,
                                                            const SpatialGrid& grid) {
  static const double c[5] = {-77.0 / 12.0, 107.0 / 6.0, -39.0 / 2.0, 61.0 / 6.0, -25.0 / 12.0};
  const int i0 = grid.zero_index();
  if (i0 < 5 || i0 + 5 >= grid.n_points())
    throw ValidationError("one_sided_slopes_at_zero: grid too small");
  Complex right(0.0, 0.0), left(0.0, 0.0);
  for (int k = 1; k <= 5; ++k) {
    right += c[k - 1] * field[static_cast<std::size_t>(i0 + k)];
    left += c[k - 1] * field[static_cast<std::size_t>(i0 - k)];
  }
  const double inv_dx = 1.0 / grid.dx();
  return {-left * inv_dx, right * inv_dx};
}

/// Independent far-field evaluation of psi(t_n, x) on |x| >= x_min (x_min >= 1):
///   psi = U(t) psi0 - sqrt(i/pi) (1/x) [ -q0 sqrt(t) e^{ix^2/4t}
///         - int qdot(s) sqrt(t-s) e^{ix^2/4(t-s)} ds
///         + (1/2) int q(s) (t-s)^{-1/2} e^{ix^2/4(t-s)} ds ],
/// all time integrals by exact oscillatory product integration. Entries with
/// |x| < x_min are NaN.
inline std::vector<Complex> far_field_duhamel(const ChargeTrajectory& traj,
                                              const InitialDatum& datum,
                                              const SpectralPropagator& prop, int n,
                                              double x_min) {
  if (x_min < 1.0) throw std::invalid_argument("far_field_duhamel: x_min must be >= 1");
  if (n < 0 || n > traj.grid.n_steps())
    throw ValidationError("far_field_duhamel: time node outside the grid");
  const SpatialGrid& grid = prop.grid();
  const double t = traj.grid.node(n);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<Complex> out(static_cast<std::size_t>(grid.n_points()), Complex(nan, nan));

  auto phi0 = detail::sample_phi0(datum, grid);
  if (n == 0) {
    for (int j = 0; j < grid.n_points(); ++j) {
      const double x = grid.node(j);
      if (std::abs(x) >= x_min)
        out[static_cast<std::size_t>(j)] =
            phi0[static_cast<std::size_t>(j)] + datum.q0() * half_sign(x);
    }
    return out;
  }
  if (traj.q_dot.empty()) throw ValidationError("far_field_duhamel: q_dot not populated");

  const auto free_part = prop.propagate(phi0, t);
  const double h = traj.grid.step();
  const Complex sqrt_i_over_pi = std::polar(1.0 / std::sqrt(constants::pi), constants::pi / 4.0);

  for (int j = 0; j < grid.n_points(); ++j) {
    const double x = grid.node(j);
    const double ax = std::abs(x);
    if (ax < x_min) continue;
    Complex t2(0.0, 0.0), t3(0.0, 0.0);
    osc::Edge hi = osc::make_edge(ax, t);
    for (int c = 0; c < n; ++c) {
      const double b = t - traj.grid.node(c);
      const osc::Edge lo = osc::make_edge(ax, t - traj.grid.node(c + 1));
      const Complex i_m12 = osc::int_m12(lo, hi, ax);
      const Complex i_p12 = osc::int_p12(lo, hi, ax);
      const Complex i_p32 = osc::int_p32(lo, hi, ax);
      const std::size_t cs = static_cast<std::size_t>(c);
      const Complex ad = traj.q_dot[cs];
      const Complex md = (traj.q_dot[cs + 1] - traj.q_dot[cs]) / h;
      t2 += (ad + md * b) * i_p12 - md * i_p32;
      const Complex aq = traj.q[cs];
      const Complex mq = (traj.q[cs + 1] - traj.q[cs]) / h;
      t3 += (aq + mq * b) * i_m12 - mq * i_p12;
      hi = lo;
    }
    const Complex phase_t = std::exp(Complex(0.0, x * x / (4.0 * t)));
    const Complex bracket = -datum.q0() * std::sqrt(t) * phase_t - t2 + 0.5 * t3;
    out[static_cast<std::size_t>(j)] = free_part[static_cast<std::size_t>(j)] +
                                       datum.q0() * evolved_step(t, x) -
                                       sqrt_i_over_pi / x * bracket;
  }
  return out;
}

/// Regularized splitting psi = phi_lambda + q G'_lambda with
/// G'_lambda(x) = sgn(x) e^{-sqrt(lambda)|x|} / 2; the shifted boundary
/// condition reads phi_lambda'(0) = (gamma + sqrt(lambda)/2) q.
struct RegularizedDecomposition {
  double lambda = 0.0;
  Complex q{0.0, 0.0};
  std::vector<Complex> phi_lambda;
  Complex slope_at_zero{0.0, 0.0};
  double boundary_residual = 0.0;
};

inline Complex g_lambda_prime(double lambda, double x) {
  return Complex(half_sign(x) * std::exp(-std::sqrt(lambda) * std::abs(x)), 0.0);
}

inline RegularizedDecomposition regularized_decompose(const WavefunctionFrame& frame,
                                                      const SpatialGrid& grid, double lambda,
                                                      double gamma_t) {
  if (!(lambda > 0.0)) throw std::invalid_argument("regularized_decompose: lambda must be positive");
  RegularizedDecomposition rd;
  rd.lambda = lambda;
  rd.q = frame.q;
  rd.phi_lambda.resize(frame.psi.size());
  for (int j = 0; j < grid.n_points(); ++j)
    rd.phi_lambda[static_cast<std::size_t>(j)] =
        frame.psi[static_cast<std::size_t>(j)] - frame.q * g_lambda_prime(lambda, grid.node(j));
  const auto [left, right] = one_sided_slopes_at_zero(rd.phi_lambda, grid);
  rd.slope_at_zero = 0.5 * (left + right);
  rd.boundary_residual =
      std::abs(rd.slope_at_zero - (gamma_t + 0.5 * std::sqrt(lambda)) * frame.q);
  return rd;
}

}  // namespace deltaprime
