#pragma once

/// Free evolution e^{it Laplacian}: spectral propagation on the periodic window,
/// analytic evolution of the Gaussian family, and the boundary trace
/// g(t) = (e^{it Laplacian} phi0)'(0) by Fourier-side quadrature.

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "deltaprime/datum.hpp"
#include "deltaprime/grids.hpp"
#include "deltaprime/types.hpp"

namespace deltaprime {

/// Periodic spectral propagator. Construction plans the transforms (not
/// thread-safe); propagation afterwards is read-only and uses per-call buffers.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const SpatialGrid& grid, double boundary_mass_tol = 1e-8)
      : grid_(grid), boundary_mass_tol_(boundary_mass_tol) {
    const int n = grid_.n_points();
    k_.resize(static_cast<std::size_t>(n));
    const double dk = constants::pi / grid_.half_width();
    for (int m = 0; m < n; ++m) k_[static_cast<std::size_t>(m)] = dk * (m <= n / 2 ? m : m - n);
    scratch_.resize(static_cast<std::size_t>(n));
    auto* raw = reinterpret_cast<fftw_complex*>(scratch_.data());
    fwd_ = fftw_plan_dft_1d(n, raw, raw, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    inv_ = fftw_plan_dft_1d(n, raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!fwd_ || !inv_) throw std::runtime_error("SpectralPropagator: FFTW planning failed");
  }

  ~SpectralPropagator() {
    if (fwd_) fftw_destroy_plan(fwd_);
    if (inv_) fftw_destroy_plan(inv_);
  }
  SpectralPropagator(const SpectralPropagator&) = delete;
  SpectralPropagator& operator=(const SpectralPropagator&) = delete;

  const SpatialGrid& grid() const { return grid_; }

  /// Checks that |psi| at the outermost cells is below the boundary-mass
  /// tolerance (aliasing guard for the periodic transform).
  void check_boundary_mass(std::span<const Complex> psi) const {
    const int n = grid_.n_points();
    const int edge = std::max(2, n / 256);
    double worst = 0.0;
    for (int j = 0; j < edge; ++j) {
      worst = std::max(worst, std::abs(psi[static_cast<std::size_t>(j)]));
      worst = std::max(worst, std::abs(psi[static_cast<std::size_t>(n - 1 - j)]));
    }
    if (worst > boundary_mass_tol_)
      throw NumericalGuardError("boundary mass " + std::to_string(worst) +
                                " exceeds tolerance at the window edges");
  }

  /// U(t) psi by DFT, multiplication with e^{-i k^2 t}, inverse DFT.
  std::vector<Complex> propagate(std::span<const Complex> psi, double t) const {
    if (t < 0.0) throw std::invalid_argument("propagate: t must be nonnegative");
    check_boundary_mass(psi);
    std::vector<Complex> buf(psi.begin(), psi.end());
    auto* raw = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_execute_dft(fwd_, raw, raw);
    if (t != 0.0)
      for (std::size_t m = 0; m < buf.size(); ++m)
        buf[m] *= std::polar(1.0, -k_[m] * k_[m] * t);
    fftw_execute_dft(inv_, raw, raw);
    const double inv_n = 1.0 / static_cast<double>(buf.size());
    for (auto& v : buf) v *= inv_n;
    return buf;
  }

  /// Spectral m-th derivative (multiplication by (ik)^m). No boundary guard:
  /// callers window the field first.
  std::vector<Complex> derivative(std::span<const Complex> f, int order) const {
    std::vector<Complex> buf(f.begin(), f.end());
    auto* raw = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_execute_dft(fwd_, raw, raw);
    for (std::size_t m = 0; m < buf.size(); ++m) {
      Complex mult(1.0, 0.0);
      for (int p = 0; p < order; ++p) mult *= Complex(0.0, k_[m]);
      buf[m] *= mult;
    }
    fftw_execute_dft(inv_, raw, raw);
    const double inv_n = 1.0 / static_cast<double>(buf.size());
    for (auto& v : buf) v *= inv_n;
    return buf;
  }

 private:
  SpatialGrid grid_;
  double boundary_mass_tol_;
  std::vector<double> k_;
  std::vector<Complex> scratch_;
  fftw_plan fwd_ = nullptr, inv_ = nullptr;
};

enum class GaussianKind { gaussian, x_gaussian };

/// Analytic free evolution of the Gaussian family (principal branches):
///   e^{itD} e^{-a x^2}     = B^{-1/2} e^{-a x^2 / B},        B = 1 + 4iat
///   e^{itD} (x e^{-a x^2}) = x B^{-3/2} e^{-a x^2 / B}
inline Complex gaussian_evolve(double a, GaussianKind kind, double t, double x) {
  if (!(a > 0.0)) throw std::invalid_argument("gaussian_evolve: width must be positive");
  const Complex B(1.0, 4.0 * a * t);
  const Complex rB = std::sqrt(B);
  const Complex core = std::exp(-a * x * x / B);
  if (kind == GaussianKind::gaussian) return core / rB;
  return x * core / (rB * B);
}

/// Analytic free field of a family datum and its first two x-derivatives.
inline Complex evolve_family(const InitialDatum& d, double t, double x) {
  Complex v(0.0, 0.0);
  for (const auto& term : d.terms())
    v += term.coef * gaussian_evolve(term.a,
                                     term.kind == GaussianTerm::Kind::gaussian
                                         ? GaussianKind::gaussian
                                         : GaussianKind::x_gaussian,
                                     t, x);
  return v;
}

inline Complex evolve_family_dx(const InitialDatum& d, double t, double x) {
  Complex v(0.0, 0.0);
  for (const auto& term : d.terms()) {
    const Complex B(1.0, 4.0 * term.a * t);
    const Complex rB = std::sqrt(B);
    const Complex core = std::exp(-term.a * x * x / B);
    if (term.kind == GaussianTerm::Kind::gaussian)
      v += term.coef * (-2.0 * term.a * x / B) * core / rB;
    else
      v += term.coef * (1.0 - 2.0 * term.a * x * x / B) * core / (rB * B);
  }
  return v;
}

inline Complex evolve_family_dxx(const InitialDatum& d, double t, double x) {
  Complex v(0.0, 0.0);
  for (const auto& term : d.terms()) {
    const Complex B(1.0, 4.0 * term.a * t);
    const Complex rB = std::sqrt(B);
    const Complex core = std::exp(-term.a * x * x / B);
    const Complex ax2B = term.a * x * x / B;
    if (term.kind == GaussianTerm::Kind::gaussian)
      v += term.coef * (4.0 * term.a * term.a * x * x / (B * B) - 2.0 * term.a / B) * core / rB;
    else
      v += term.coef * (-2.0 * term.a * x / B) * (3.0 - 2.0 * ax2B) * core / (rB * B);
  }
  return v;
}

namespace detail {

/// k-grid for the trace quadrature: support from |k phi0_hat(k)| < cut * peak,
/// spacing from the phase-resolution bound 2 dk k_max t_final < 0.5 rad.
struct TraceQuadratureGrid {
  double k_max = 0.0;
  double dk = 0.0;
  int n_half = 0;  // nodes on (0, k_max]
};

inline TraceQuadratureGrid trace_grid(const InitialDatum& d, double t_final) {
  // scan the analytic transform for its effective support
  double peak = 0.0;
  double k_max = 0.0;
  const double step = 0.05;
  double below = 0;
  for (double k = step; k < 1e4; k += step) {
    const double mag = std::abs(k * d.phi0_hat(k)) + std::abs(k * d.phi0_hat(-k));
    peak = std::max(peak, mag);
    if (mag < 1e-14 * peak) {
      if (++below > 40) {
        k_max = k;
        break;
      }
    } else {
      below = 0;
    }
  }
  if (k_max == 0.0)
    throw NumericalGuardError("trace quadrature: Fourier support exceeds the scan cap");
  TraceQuadratureGrid g;
  g.k_max = k_max;
  const double dk_phase = 0.5 / (2.0 * k_max * std::max(t_final, 1e-6)) * 0.8;
  g.dk = std::min(dk_phase, k_max / 512.0);
  const double n_half_d = std::ceil(k_max / g.dk);
  if (n_half_d > 2e6)
    throw NumericalGuardError(
        "trace quadrature: oscillation resolution needs more than 2e6 nodes; refuse");
  g.n_half = static_cast<int>(n_half_d);
  g.dk = k_max / g.n_half;
  return g;
}

}  // namespace detail

/// Boundary trace g(t_n) = (U(t_n) phi0)'(0) on the grid nodes, by trapezoid
/// quadrature of (1/2pi) int e^{-ik^2 t} (ik) phi0_hat(k) dk over [-k_max, k_max].
/// For the Gaussian family phi0_hat is analytic, so the only error is the
/// k-quadrature itself.
inline std::vector<Complex> trace_route_fourier(const InitialDatum& datum, const TimeGrid& grid) {
  const auto g = detail::trace_grid(datum, grid.t_final());
  // Precompute k nodes and ik*phi0_hat(k) once; integrand decays to ~1e-14 at the ends.
  std::vector<double> ks;
  std::vector<Complex> amp;
  ks.reserve(static_cast<std::size_t>(2 * g.n_half + 1));
  amp.reserve(ks.capacity());
  for (int m = -g.n_half; m <= g.n_half; ++m) {
    const double k = m * g.dk;
    ks.push_back(k);
    amp.push_back(Complex(0.0, k) * datum.phi0_hat(k));
  }
  std::vector<Complex> out(grid.n_nodes());
  const double w = g.dk / (2.0 * constants::pi);
  for (std::size_t n = 0; n < out.size(); ++n) {
    const double t = grid.node(static_cast<int>(n));
    Complex acc(0.0, 0.0);
    for (std::size_t m = 0; m < ks.size(); ++m)
      acc += amp[m] * std::polar(1.0, -ks[m] * ks[m] * t);
    out[n] = w * acc;
  }
  return out;
}

/// Trace for a tabulated datum: phi0_hat evaluated by direct DFT sums on a
/// resolution-controlled k-grid. The effective Fourier support is measured on
/// the FFT bins first; if resolving the phase would need more than 2e6 quadrature
/// nodes the routine refuses.
inline std::vector<Complex> trace_route_fourier_tabulated(const InitialDatum& datum,
                                                          const SpatialGrid& sgrid,
                                                          const TimeGrid& grid) {
  if (!datum.has_tabulated())
    throw ValidationError("trace_route_fourier_tabulated: datum carries no samples");
  const auto& f = datum.tabulated();
  const int n = sgrid.n_points();
  const double dx = sgrid.dx();
  const double L = sgrid.half_width();

  auto hat_at = [&](double k) {
    Complex acc(0.0, 0.0);
    for (int j = 0; j < n; ++j)
      acc += f[static_cast<std::size_t>(j)] * std::polar(1.0, -k * sgrid.node(j));
    return dx * acc;
  };

  // effective support scan on coarse bins
  double peak = 0.0, k_max = 0.0;
  int below = 0;
  const double scan_dk = constants::pi / L;
  for (double k = scan_dk; k <= constants::pi / dx; k += scan_dk) {
    const double mag = std::abs(k * hat_at(k)) + std::abs(k * hat_at(-k));
    peak = std::max(peak, mag);
    if (mag < 1e-12 * peak) {
      if (++below > 8) {
        k_max = k;
        break;
      }
    } else {
      below = 0;
    }
  }
  if (k_max == 0.0) k_max = constants::pi / dx;
  const double dk = 0.8 * 0.5 / (2.0 * k_max * std::max(grid.t_final(), 1e-6));
  const double n_half_d = std::ceil(k_max / dk);
  if (n_half_d > 2e6)
    throw NumericalGuardError(
        "trace quadrature: oscillation resolution needs more than 2e6 nodes; refuse");
  const int n_half = static_cast<int>(n_half_d);
  const double dk_eff = k_max / n_half;

  std::vector<double> ks;
  std::vector<Complex> amp;
  for (int m = -n_half; m <= n_half; ++m) {
    const double k = m * dk_eff;
    ks.push_back(k);
    amp.push_back(Complex(0.0, k) * hat_at(k));
  }
  std::vector<Complex> out(grid.n_nodes());
  const double w = dk_eff / (2.0 * constants::pi);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double t = grid.node(static_cast<int>(i));
    Complex acc(0.0, 0.0);
    for (std::size_t m = 0; m < ks.size(); ++m)
      acc += amp[m] * std::polar(1.0, -ks[m] * ks[m] * t);
    out[i] = w * acc;
  }
  return out;
}

/// Full-datum trace (U(s) psi0)'(0) = g(s) + q0 (4 pi i s)^{-1/2} at strictly
/// positive times. Throws if any requested time is <= 0 (the step part diverges
/// like s^{-1/2} at the origin).
inline std::vector<Complex> trace_full_psi0(const InitialDatum& datum,
                                            std::span<const double> times,
                                            std::span<const Complex> regular_trace) {
  if (times.size() != regular_trace.size())
    throw ValidationError("trace_full_psi0: times/trace size mismatch");
  std::vector<Complex> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0))
      throw std::invalid_argument("trace_full_psi0: requested at s <= 0");
    out[i] = regular_trace[i] +
             datum.q0() * std::polar(1.0 / (2.0 * std::sqrt(constants::pi * times[i])),
                                     -constants::pi / 4.0);
  }
  return out;
}

}  // namespace deltaprime
