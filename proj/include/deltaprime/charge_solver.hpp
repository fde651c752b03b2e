#pragma once

/// Solves the weakly singular Volterra charge equation
///   q(t) = f0(t) - sqrt(4i/pi) int_0^t gamma(s) q(s) / sqrt(t-s) ds
/// by implicit product-integration marching, with an independent dense
/// triangular solve and manufactured-solution machinery.

#include <functional>
#include <span>
#include <vector>

#include "deltaprime/abel.hpp"
#include "deltaprime/datum.hpp"
#include "deltaprime/free_propagator.hpp"
#include "deltaprime/gamma_profile.hpp"
#include "deltaprime/grids.hpp"
#include "deltaprime/types.hpp"

namespace deltaprime {

struct ChargeTrajectory {
  TimeGrid grid;
  std::vector<Complex> q;
  std::vector<Complex> q_dot;  // filled by charge_time_derivative
  std::vector<Complex> f0;     // the source actually used
};

enum class SourceRoute {
  regular_part,  // f0 = q0 + sqrt(4i) I[g], g the trace of the regular part
  full_datum,    // f0 from the full-datum trace, singular piece handled analytically
};

/// Source term on the grid. The `regular_part` route applies the half-order
/// integral to the boundary trace of phi0 with its exact origin value. The
/// `full_datum` route uses the trace of the whole datum, which is singular at
/// s = 0: the q0 (4 pi i s)^{-1/2} piece is integrated analytically (it
/// contributes exactly q0) and the regular remainder, unavailable at s = 0,
/// gets the extrapolated-origin endpoint treatment. The routes agree to
/// scheme order.
inline std::vector<Complex> charge_source(const InitialDatum& datum, const AbelWeights& weights,
                                          SourceRoute route,
                                          std::span<const Complex> regular_trace) {
  const TimeGrid& grid = weights.grid();
  if (regular_trace.size() != grid.n_nodes())
    throw ValidationError("charge_source: trace/grid size mismatch");
  const Complex s4i = constants::sqrt_4i();
  std::vector<Complex> g(regular_trace.begin(), regular_trace.end());
  if (route == SourceRoute::full_datum) {
    if (grid.n_steps() < 2)
      throw ValidationError("charge_source: full_datum route needs n_steps >= 2");
    g = with_extrapolated_origin(g);
  }
  auto Ig = half_integral(g, weights);
  std::vector<Complex> f0(grid.n_nodes());
  for (std::size_t n = 0; n < f0.size(); ++n) f0[n] = datum.q0() + s4i * Ig[n];
  return f0;
}

inline std::vector<Complex> charge_source(const InitialDatum& datum, const AbelWeights& weights,
                                          SourceRoute route) {
  const auto g = trace_route_fourier(datum, weights.grid());
  return charge_source(datum, weights, route, g);
}

/// Implicit product-integration marching. At node n the scalar equation
///   q_n (1 + sqrt(4i) gamma_n w[n][n]) = f0(t_n) - sqrt(4i) sum_{j<n} w[n][j] gamma_j q_j
/// is solved; q(0) = f0(0). The diagonal guard cannot trip for real gamma
/// (the coefficient has argument pi/4) but is kept as a hard error.
inline ChargeTrajectory solve_charge_marching(std::span<const Complex> f0,
                                              const GammaProfile& gamma,
                                              const AbelWeights& weights) {
  const TimeGrid& grid = weights.grid();
  if (f0.size() != grid.n_nodes()) throw ValidationError("solve_charge_marching: source size mismatch");
  const Complex s4i = constants::sqrt_4i();
  ChargeTrajectory traj;
  traj.grid = grid;
  traj.f0.assign(f0.begin(), f0.end());
  traj.q.resize(grid.n_nodes());
  traj.q[0] = f0[0];
  std::vector<double> gam(grid.n_nodes());
  for (std::size_t n = 0; n < gam.size(); ++n) gam[n] = gamma(grid.node(static_cast<int>(n)));
  for (std::size_t n = 1; n < grid.n_nodes(); ++n) {
    const auto row = weights.row(n);
    Complex hist(0.0, 0.0);
    for (std::size_t j = 0; j + 1 < row.size(); ++j) hist += row[j] * gam[j] * traj.q[j];
    const Complex den = 1.0 + s4i * gam[n] * row.back();
    if (std::abs(den) < 1e-10)
      throw NumericalGuardError("charge marching: diagonal degeneracy at node " +
                                std::to_string(n) + "; refine the time grid");
    traj.q[n] = (f0[n] - s4i * hist) / den;
  }
  return traj;
}

/// Assembles the lower-triangular system (Id + sqrt(4i) W diag(gamma)) q = f0
/// explicitly and solves it by forward substitution with reversed accumulation
/// order. Same linear system as marching, independent code path; the two agree
/// to roundoff.
inline ChargeTrajectory solve_charge_dense(std::span<const Complex> f0, const GammaProfile& gamma,
                                           const AbelWeights& weights,
                                           std::size_t max_bytes = std::size_t(6) << 30) {
  const TimeGrid& grid = weights.grid();
  if (f0.size() != grid.n_nodes()) throw ValidationError("solve_charge_dense: source size mismatch");
  const std::size_t nn = grid.n_nodes();
  const std::size_t need = sizeof(Complex) * nn * (nn + 1) / 2;
  if (need > max_bytes)
    throw NumericalGuardError("solve_charge_dense: matrix storage exceeds budget");
  const Complex s4i = constants::sqrt_4i();
  std::vector<double> gam(nn);
  for (std::size_t n = 0; n < nn; ++n) gam[n] = gamma(grid.node(static_cast<int>(n)));

  std::vector<std::vector<Complex>> A(nn);
  A[0] = {Complex(1.0, 0.0)};
  for (std::size_t n = 1; n < nn; ++n) {
    const auto row = weights.row(n);
    A[n].resize(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
      A[n][j] = s4i * row[j] * gam[j];
      if (j == n) A[n][j] += 1.0;
    }
  }
  ChargeTrajectory traj;
  traj.grid = grid;
  traj.f0.assign(f0.begin(), f0.end());
  traj.q.resize(nn);
  for (std::size_t n = 0; n < nn; ++n) {
    Complex acc = f0[n];
    for (std::size_t j = n; j-- > 0;) acc -= A[n][j] * traj.q[j];
    if (std::abs(A[n][n]) < 1e-10)
      throw NumericalGuardError("charge dense solve: diagonal degeneracy at node " +
                                std::to_string(n));
    traj.q[n] = acc / A[n][n];
  }
  return traj;
}

/// Fourth-order finite differences of the solved charge: five-point central in
/// the interior, one-sided at the first/last two nodes. Exact through degree-4
/// polynomials; needs at least 4 steps.
inline std::vector<Complex> charge_time_derivative(std::span<const Complex> q, double h) {
  const std::size_t n = q.size();
  if (n < 5) throw ValidationError("charge_time_derivative: need at least 4 time steps");
  std::vector<Complex> d(n);
  const double w = 1.0 / (12.0 * h);
  d[0] = w * (-25.0 * q[0] + 48.0 * q[1] - 36.0 * q[2] + 16.0 * q[3] - 3.0 * q[4]);
  d[1] = w * (-3.0 * q[0] - 10.0 * q[1] + 18.0 * q[2] - 6.0 * q[3] + q[4]);
  for (std::size_t j = 2; j + 2 < n; ++j)
    d[j] = w * (q[j - 2] - 8.0 * q[j - 1] + 8.0 * q[j + 1] - q[j + 2]);
  d[n - 2] = w * (-q[n - 5] + 6.0 * q[n - 4] - 18.0 * q[n - 3] + 10.0 * q[n - 2] + 3.0 * q[n - 1]);
  d[n - 1] = w * (25.0 * q[n - 1] - 48.0 * q[n - 2] + 36.0 * q[n - 3] - 16.0 * q[n - 4] +
                  3.0 * q[n - 5]);
  return d;
}

inline void attach_time_derivative(ChargeTrajectory& traj) {
  traj.q_dot = charge_time_derivative(traj.q, traj.grid.step());
}

/// Manufactured source for a prescribed exact charge q*: f0 = q* + sqrt(4i) I[gamma q*],
/// the half-order integral evaluated by fine composite Gauss-Legendre quadrature in
/// the variable u = sqrt(t - s) (smooth integrand), independent of the product
/// weights used by the solver.
inline std::vector<Complex> manufactured_source(const std::function<Complex(double)>& q_star,
                                                const GammaProfile& gamma, const TimeGrid& grid,
                                                int panels = 64) {
  static const double gl_x[6] = {-0.9324695142031521, -0.6612093864662645, -0.2386191860831969,
                                 0.2386191860831969,  0.6612093864662645,  0.9324695142031521};
  static const double gl_w[6] = {0.1713244923791704, 0.3607615730481386, 0.4679139345726910,
                                 0.4679139345726910, 0.3607615730481386, 0.1713244923791704};
  const Complex s4i = constants::sqrt_4i();
  std::vector<Complex> f0(grid.n_nodes());
  for (std::size_t n = 0; n < f0.size(); ++n) {
    const double tn = grid.node(static_cast<int>(n));
    Complex integral(0.0, 0.0);
    if (tn > 0.0) {
      const double U = std::sqrt(tn);
      const double du = U / panels;
      for (int p = 0; p < panels; ++p) {
        const double mid = (p + 0.5) * du;
        for (int i = 0; i < 6; ++i) {
          const double u = mid + 0.5 * du * gl_x[i];
          const double s = tn - u * u;
          integral += gl_w[i] * gamma(s) * q_star(s);
        }
      }
      integral *= 0.5 * du * 2.0 / std::sqrt(constants::pi);
    }
    f0[n] = q_star(tn) + s4i * integral;
  }
  return f0;
}

}  // namespace deltaprime
