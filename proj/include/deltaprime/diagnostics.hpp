#pragma once

/// Structural diagnostics: windowed norm conservation, boundary-condition
/// residuals (raw and half-integral smoothed), the quadratic-form trace for
/// constant coupling, Gagliardo seminorms, and the built-in identity suite.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "deltaprime/abel.hpp"
#include "deltaprime/charge_solver.hpp"
#include "deltaprime/reconstruction.hpp"

namespace deltaprime {

/// || phi + q*step ||^2 on the window [-L, L), split into smooth pieces so the
/// step contributes exactly: int |phi|^2 + 2 Re( qbar int step*phi ) + |q|^2 L/2.
/// The cross integral is split at the origin; the jump never meets quadrature.
inline double windowed_norm_sq(std::span<const Complex> phi, Complex q, const SpatialGrid& grid) {
  const int n = grid.n_points();
  const double dx = grid.dx();
  const int i0 = grid.zero_index();
  double abs2 = 0.0;
  for (const Complex& v : phi) abs2 += std::norm(v);
  abs2 *= dx;  // periodic-style rectangle sum over [-L, L)

  // int_0^L phi (right half, periodic value at +L) and int_{-L}^0 phi
  Complex right = 0.5 * (phi[static_cast<std::size_t>(i0)] + phi[0]);
  for (int j = i0 + 1; j < n; ++j) right += phi[static_cast<std::size_t>(j)];
  Complex left = 0.5 * (phi[0] + phi[static_cast<std::size_t>(i0)]);
  for (int j = 1; j < i0; ++j) left += phi[static_cast<std::size_t>(j)];
  const Complex cross = 0.5 * dx * (right - left);

  return abs2 + 2.0 * (std::conj(q) * cross).real() + std::norm(q) * grid.half_width() / 2.0;
}

inline double windowed_norm(const WavefunctionFrame& frame, const SpatialGrid& grid) {
  return std::sqrt(windowed_norm_sq(frame.phi, frame.q, grid));
}

/// Norm trace ||psi(t)|| / ||psi(0)|| per frame; frames[0] is the reference.
inline std::vector<double> norm_conservation(const std::vector<WavefunctionFrame>& frames,
                                             const SpatialGrid& grid) {
  if (frames.empty()) return {};
  std::vector<double> ratio(frames.size());
  const double base = windowed_norm(frames[0], grid);
  if (!(base > 0.0)) throw ValidationError("norm_conservation: vanishing reference norm");
  for (std::size_t i = 0; i < frames.size(); ++i)
    ratio[i] = windowed_norm(frames[i], grid) / base;
  return ratio;
}

/// phi'(0, t_n) for every time node from one-sided stencils on a local
/// reconstruction (closed-form free part plus the Duhamel sum on ten points).
struct BoundarySlopeSeries {
  std::vector<Complex> slope;      // mean of one-sided slopes
  std::vector<double> mismatch;    // |left - right|, C^1 witness
};

inline BoundarySlopeSeries boundary_slope_series(const ChargeTrajectory& traj,
                                                 const InitialDatum& datum, double dx,
                                                 DuhamelRule rule = DuhamelRule::trapezoid) {
  const std::size_t nn = traj.grid.n_nodes();
  BoundarySlopeSeries out;
  out.slope.resize(nn);
  out.mismatch.resize(nn, 0.0);
  out.slope[0] = datum.phi0_prime_at_zero();

  std::vector<double> xs;
  for (int k = 5; k >= 1; --k) xs.push_back(-k * dx);
  for (int k = 1; k <= 5; ++k) xs.push_back(k * dx);
  static const double c[5] = {-77.0 / 12.0, 107.0 / 6.0, -39.0 / 2.0, 61.0 / 6.0, -25.0 / 12.0};

  for (std::size_t n = 1; n < nn; ++n) {
    const auto vals = reconstruct_phi_at(traj, datum, static_cast<int>(n), xs, rule);
    Complex left(0.0, 0.0), right(0.0, 0.0);
    for (int k = 1; k <= 5; ++k) {
      left += c[k - 1] * vals[static_cast<std::size_t>(5 - k)];
      right += c[k - 1] * vals[static_cast<std::size_t>(4 + k)];
    }
    left = -left / dx;
    right = right / dx;
    out.slope[n] = 0.5 * (left + right);
    out.mismatch[n] = std::abs(left - right);
  }
  return out;
}

struct BoundaryResidual {
  std::vector<double> raw;       // |phi'(0,t) - gamma(t) q(t)|
  std::vector<double> smoothed;  // |I[phi'(0,.) - gamma q](t)| -- the identity the
                                 // charge equation enforces
  std::vector<double> slope_mismatch;
};

inline BoundaryResidual boundary_residual(const ChargeTrajectory& traj, const InitialDatum& datum,
                                          const GammaProfile& gamma, const AbelWeights& weights,
                                          double dx, DuhamelRule rule = DuhamelRule::trapezoid) {
  const auto series = boundary_slope_series(traj, datum, dx, rule);
  const std::size_t nn = traj.grid.n_nodes();
  std::vector<Complex> defect(nn);
  BoundaryResidual out;
  out.raw.resize(nn);
  out.slope_mismatch = series.mismatch;
  for (std::size_t n = 0; n < nn; ++n) {
    const double g = gamma(traj.grid.node(static_cast<int>(n)));
    defect[n] = series.slope[n] - g * traj.q[n];
    out.raw[n] = std::abs(defect[n]);
  }
  const auto smooth = half_integral(defect, weights);
  out.smoothed.resize(nn);
  for (std::size_t n = 0; n < nn; ++n) out.smoothed[n] = std::abs(smooth[n]);
  return out;
}

/// Quadratic form Q_gamma = ||phi'||^2 + gamma |q|^2 per frame; requires the
/// slope field phi_x and a constant coupling (autonomous case).
inline std::vector<double> energy_trace(const std::vector<WavefunctionFrame>& frames,
                                        const SpatialGrid& grid, const GammaProfile& gamma) {
  if (gamma.kind() != GammaKind::constant)
    throw ValidationError("energy_trace: coupling must be constant in time");
  const double g = gamma(0.0);
  std::vector<double> out(frames.size());
  const double dx = grid.dx();
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].phi_x.empty()) throw ValidationError("energy_trace: phi_x not populated");
    double kin = 0.0;
    for (const Complex& v : frames[i].phi_x) kin += std::norm(v);
    out[i] = kin * dx + g * std::norm(frames[i].q);
  }
  return out;
}

/// Gagliardo seminorm [f]_{H^nu(a,b)} from uniform samples: trapezoid pair sum
/// off the diagonal plus the |s-s'| < h strip estimated from the local linear
/// modulus. nu must lie in (0,1).
inline double gagliardo_seminorm(std::span<const Complex> f, double a, double b, double nu) {
  if (!(nu > 0.0 && nu < 1.0)) throw std::invalid_argument("gagliardo_seminorm: nu outside (0,1)");
  const std::size_t m = f.size();
  if (m < 3) throw ValidationError("gagliardo_seminorm: need at least 3 samples");
  const double h = (b - a) / static_cast<double>(m - 1);
  std::vector<double> w(m, h);
  w[0] = w[m - 1] = 0.5 * h;
  double sum = 0.0;
  for (std::size_t d = 1; d < m; ++d) {
    const double kern = 1.0 / std::pow(d * h, 1.0 + 2.0 * nu);
    double acc = 0.0;
    for (std::size_t i = 0; i + d < m; ++i) acc += w[i] * w[i + d] * std::norm(f[i + d] - f[i]);
    sum += 2.0 * acc * kern;
  }
  // near-diagonal strip via local slopes
  double strip = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    Complex dv;
    if (i == 0)
      dv = (f[1] - f[0]) / h;
    else if (i == m - 1)
      dv = (f[m - 1] - f[m - 2]) / h;
    else
      dv = (f[i + 1] - f[i - 1]) / (2.0 * h);
    strip += std::norm(dv) * w[i];
  }
  strip *= 2.0 * std::pow(h, 2.0 - 2.0 * nu) / (2.0 - 2.0 * nu);
  return std::sqrt(sum + strip);
}

/// Per-run diagnostics bundle (serialized as JSON by the io layer).
struct DiagnosticsReport {
  std::vector<double> frame_times;
  std::vector<double> norm_ratio;
  std::vector<double> boundary_raw;
  std::vector<double> boundary_smoothed;
  std::vector<double> boundary_times;
  std::vector<double> energy;                       // empty unless gamma constant
  std::map<std::string, double> gagliardo;          // label -> seminorm
  std::vector<std::pair<double, double>> regularized;  // (lambda, residual)
  double source_route_deviation = 0.0;
  double marching_dense_deviation = 0.0;
  double max_norm_drift = 0.0;
  double max_smoothed_boundary = 0.0;
  double energy_drift = 0.0;
};

}  // namespace deltaprime
