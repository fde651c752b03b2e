#pragma once

/// Half-order integral operator (I f)(t) = (1/sqrt(pi)) int_0^t f(s)/sqrt(t-s) ds,
/// discretized by product integration: the kernel is integrated exactly against
/// the piecewise-linear interpolant of f, so the rule is exact for piecewise-linear
/// inputs. Weights form a dense lower-triangular array.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "deltaprime/grids.hpp"
#include "deltaprime/types.hpp"

namespace deltaprime {

class AbelWeights {
 public:
  /// Closed-form product-trapezoidal weights on `grid`. Memory is O(N^2);
  /// refuses to allocate beyond `max_bytes`.
  static AbelWeights build(const TimeGrid& grid, std::size_t max_bytes = std::size_t(6) << 30) {
    const int N = grid.n_steps();
    const std::size_t need = sizeof(double) * (std::size_t(N) + 1) * (std::size_t(N) + 2) / 2;
    if (need > max_bytes)
      throw NumericalGuardError("AbelWeights: weight storage " + std::to_string(need) +
                                " bytes exceeds budget");
    AbelWeights w;
    w.grid_ = grid;
    w.rows_.resize(grid.n_nodes());
    w.rows_[0] = {0.0};
    const double h = grid.step();
    const double inv_sqrt_pi = 1.0 / std::sqrt(constants::pi);
    for (int n = 1; n <= N; ++n) {
      auto& row = w.rows_[static_cast<std::size_t>(n)];
      row.assign(static_cast<std::size_t>(n) + 1, 0.0);
      for (int j = 0; j < n; ++j) {
        // cell [t_j, t_{j+1}]; tau = t_n - s runs over [a, b]
        const double a = (n - j - 1) * h;
        const double b = (n - j) * h;
        const double sa = std::sqrt(a), sb = std::sqrt(b);
        const double k0 = 2.0 * (sb - sa);                            // int tau^{-1/2}
        const double k1 = b * k0 - (2.0 / 3.0) * (b * sb - a * sa);   // int (b-tau) tau^{-1/2}
        row[static_cast<std::size_t>(j)] += (k0 - k1 / h) * inv_sqrt_pi;
        row[static_cast<std::size_t>(j) + 1] += (k1 / h) * inv_sqrt_pi;
      }
    }
    return w;
  }

  const TimeGrid& grid() const { return grid_; }
  std::size_t n_rows() const { return rows_.size(); }
  std::span<const double> row(std::size_t n) const { return rows_[n]; }
  double diagonal(std::size_t n) const { return rows_[n].back(); }

 private:
  TimeGrid grid_;
  std::vector<std::vector<double>> rows_;
};

/// Applies the half-order integral to samples of f on the weights' grid.
/// (I f)(0) = 0. Throws on grid mismatch.
inline std::vector<Complex> half_integral(std::span<const Complex> f, const AbelWeights& w) {
  if (f.size() != w.n_rows()) throw ValidationError("half_integral: sample/grid size mismatch");
  std::vector<Complex> out(f.size());
  out[0] = Complex(0.0, 0.0);
  for (std::size_t n = 1; n < f.size(); ++n) {
    const auto row = w.row(n);
    Complex acc(0.0, 0.0);
    for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * f[j];
    out[n] = acc;
  }
  return out;
}

/// I applied to s -> c (pi s)^{-1/2}, evaluated analytically: the result is the
/// constant c at every node. Bypasses the weights entirely, so the endpoint
/// singularity costs nothing.
inline std::vector<Complex> half_integral_singular(Complex c, const AbelWeights& w) {
  return std::vector<Complex>(w.n_rows(), c);
}

/// Replaces the origin sample by the linear extrapolation 2 f(t_1) - f(t_2).
/// Endpoint treatment for inputs that are integrable-singular at s = 0 when no
/// analytic route applies; expect O(sqrt(h)) accuracy away from the origin.
inline std::vector<Complex> with_extrapolated_origin(std::span<const Complex> f) {
  if (f.size() < 3) throw ValidationError("with_extrapolated_origin: need at least 3 samples");
  std::vector<Complex> out(f.begin(), f.end());
  out[0] = 2.0 * f[1] - f[2];
  return out;
}

}  // namespace deltaprime
