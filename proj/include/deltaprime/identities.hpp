#pragma once

/// Built-in identity suite: exact relations the numerics must reproduce.
/// Deviations are measured on the second half of the time window where the
/// identities apply pointwise; early nodes of the half-order quadrature carry
/// a self-similar startup error that no refinement removes.

#include <cmath>
#include <string>
#include <vector>

#include "deltaprime/abel.hpp"
#include "deltaprime/diagnostics.hpp"
#include "deltaprime/free_propagator.hpp"
#include "deltaprime/special_functions.hpp"

namespace deltaprime {

struct IdentityRow {
  std::string name;
  double value = 0.0;      // measured metric
  double tolerance = 0.0;  // pass iff value <= tolerance
  bool pass = false;
  std::string note;
};

namespace detail {

inline double max_dev_second_half(const std::vector<Complex>& v, Complex target) {
  double dev = 0.0;
  for (std::size_t n = v.size() / 2; n < v.size(); ++n)
    dev = std::max(dev, std::abs(v[n] - target));
  return dev;
}

inline std::vector<Complex> raw_singular_identity(int n_steps) {
  const TimeGrid grid(1.0, n_steps);
  const auto w = AbelWeights::build(grid);
  std::vector<Complex> f(grid.n_nodes());
  for (std::size_t n = 1; n < f.size(); ++n)
    f[n] = 1.0 / std::sqrt(constants::pi * grid.node(static_cast<int>(n)));
  return half_integral(with_extrapolated_origin(f), w);
}

inline double second_iterate_dev(int n_steps) {
  const TimeGrid grid(1.0, n_steps);
  const auto w = AbelWeights::build(grid);
  std::vector<Complex> f(grid.n_nodes());
  for (std::size_t n = 0; n < f.size(); ++n) f[n] = std::cos(grid.node(static_cast<int>(n)));
  const auto ii = half_integral(half_integral(f, w), w);
  double dev = 0.0;
  for (std::size_t n = ii.size() / 2; n < ii.size(); ++n)
    dev = std::max(dev, std::abs(ii[n] - std::sin(grid.node(static_cast<int>(n)))));
  return dev;
}

}  // namespace detail

inline std::vector<IdentityRow> run_identity_suite() {
  std::vector<IdentityRow> rows;
  auto push = [&rows](std::string name, double value, double tol, std::string note = "") {
    rows.push_back({std::move(name), value, tol, value <= tol, std::move(note)});
  };

  // Fresnel reference value against the frozen independent-quadrature result.
  {
    const Complex ref(0.9045242379, 0.3102683017);
    push("fresnel(1) reference", std::abs(fresnel(1.0) - ref), 1e-9);
  }
  // Integration-by-parts tail bound |int_z^inf e^{iu^2} du| <= 1/z on a log grid.
  {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double z = std::pow(10.0, 6.0 * i / 99.0);
      worst = std::max(worst, std::abs(fresnel_tail(z)) * z);
    }
    push("fresnel tail bound z*|T(z)|", worst, 1.0, "z in [1, 1e6]");
  }
  // Series / large-argument branch agreement at the switch point.
  {
    const Complex series = detail::fresnel_series(detail::fresnel_switch);
    const Complex cf =
        0.5 * constants::sqrt_pi_i() - detail::fresnel_tail_cf(detail::fresnel_switch);
    push("fresnel branch crossover", std::abs(series - cf), 1e-10);
  }
  // I[(pi s)^{-1/2}] = 1: analytic route is exact by construction.
  {
    const TimeGrid grid(1.0, 64);
    const auto w = AbelWeights::build(grid);
    const auto one = half_integral_singular(Complex(1.0, 0.0), w);
    push("I[(pi s)^{-1/2}] = 1 (analytic route)",
         detail::max_dev_second_half(one, Complex(1.0, 0.0)), 1e-10);
  }
  // Same identity through the raw product weights with the extrapolated origin.
  {
    const double e256 = detail::max_dev_second_half(detail::raw_singular_identity(256),
                                                    Complex(1.0, 0.0));
    const double e512 = detail::max_dev_second_half(detail::raw_singular_identity(512),
                                                    Complex(1.0, 0.0));
    const double e1024 = detail::max_dev_second_half(detail::raw_singular_identity(1024),
                                                     Complex(1.0, 0.0));
    push("I[(pi s)^{-1/2}] = 1 (raw weights, N=256)", e256, 5e-2);
    const double order = std::min(std::log2(e256 / e512), std::log2(e512 / e1024));
    rows.push_back({"raw singular identity order", order, 0.0, order >= 0.5,
                    "observed order, floor 0.5"});
  }
  // I^2 f = int_0^t f for f = cos.
  {
    const double e1024 = detail::second_iterate_dev(1024);
    const double e256 = detail::second_iterate_dev(256);
    const double e512 = detail::second_iterate_dev(512);
    push("I^2 cos = sin (N=1024)", e1024, 1e-3);
    const double order = std::min(std::log2(e256 / e512), std::log2(e512 / e1024));
    rows.push_back({"I^2 identity order", order, 0.0, order >= 1.4, "observed order, floor 1.4"});
  }
  // Boundary trace of x e^{-x^2} against the closed form (1+4it)^{-3/2}.
  {
    const TimeGrid grid(1.0, 256);
    const InitialDatum d({GaussianTerm{GaussianTerm::Kind::x_gaussian, 1.0, {1.0, 0.0}}},
                         Complex(0.0, 0.0), 0.0);
    const auto g = trace_route_fourier(d, grid);
    double dev = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n) {
      const Complex B(1.0, 4.0 * grid.node(static_cast<int>(n)));
      const Complex exact = 1.0 / (B * std::sqrt(B));
      dev = std::max(dev, std::abs(g[n] - exact));
    }
    push("boundary trace vs closed form", dev, 1e-7);
  }
  // Slope of the evolved step at the origin against a central difference.
  {
    const double t = 0.3, eps = 1e-5;
    const Complex fd = (evolved_step(t, eps) - evolved_step(t, -eps)) / (2.0 * eps);
    push("evolved step slope at 0", std::abs(fd - evolved_step_slope_at_zero(t)), 1e-8);
  }
  // Time derivative of the evolved step against a central difference.
  {
    const double t = 0.7, x = 1.3, eps = 1e-6;
    const Complex fd = (evolved_step(t + eps, x) - evolved_step(t - eps, x)) / (2.0 * eps);
    const Complex an = evolved_step_dt(t, x);
    push("evolved step dt kernel", std::abs(fd - an) / std::abs(an), 1e-6, "relative");
  }
  // Gagliardo quadrature against the exact [s]_{H^{1/2}(0,1)} = 1.
  {
    std::vector<Complex> f(513);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = static_cast<double>(i) / 512.0;
    push("gagliardo [s]_{H^{1/2}(0,1)} = 1", std::abs(gagliardo_seminorm(f, 0.0, 1.0, 0.5) - 1.0),
         2e-2);
  }
  return rows;
}

}  // namespace deltaprime
