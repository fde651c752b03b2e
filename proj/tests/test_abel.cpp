#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "deltaprime/abel.hpp"
#include "deltaprime/diagnostics.hpp"

using namespace deltaprime;

namespace {

// Independent route: for piecewise-linear f the half-order integral has the
// cellwise antiderivative (a + b t) * 2 sqrt(tau) - (2/3) b tau^{3/2} in tau = t - s.
Complex exact_half_integral_piecewise_linear(const std::vector<Complex>& f, const TimeGrid& g,
                                             int n) {
  const double t = g.node(n);
  Complex acc(0.0, 0.0);
  for (int j = 0; j < n; ++j) {
    const double s0 = g.node(j), s1 = g.node(j + 1);
    const Complex fj = f[static_cast<std::size_t>(j)];
    const Complex slope = (f[static_cast<std::size_t>(j + 1)] - fj) / (s1 - s0);
    // f(s) = alpha + beta s on the cell
    const Complex beta = slope;
    const Complex alpha = fj - slope * s0;
    auto anti = [&](double tau) {
      return (alpha + beta * t) * 2.0 * std::sqrt(tau) - (2.0 / 3.0) * beta * tau * std::sqrt(tau);
    };
    acc += anti(t - s0) - anti(t - s1);
  }
  return acc / std::sqrt(constants::pi);
}

}  // namespace

TEST_CASE("weight rows integrate constants and linears exactly", "[abel]") {
  const TimeGrid grid(1.3, 57);
  const auto w = AbelWeights::build(grid);
  for (std::size_t n = 1; n < grid.n_nodes(); ++n) {
    const double tn = grid.node(static_cast<int>(n));
    double sum = 0.0, sum_t = 0.0;
    const auto row = w.row(n);
    for (std::size_t j = 0; j < row.size(); ++j) {
      REQUIRE(row[j] >= 0.0);
      sum += row[j];
      sum_t += row[j] * grid.node(static_cast<int>(j));
    }
    // I[1](t) = 2 sqrt(t/pi); I[s](t) = (4/3) t^{3/2}/sqrt(pi)
    REQUIRE(std::abs(sum - 2.0 * std::sqrt(tn / constants::pi)) < 1e-13 * std::max(1.0, sum));
    REQUIRE(std::abs(sum_t - (4.0 / 3.0) * tn * std::sqrt(tn) / std::sqrt(constants::pi)) < 1e-13);
  }
}

TEST_CASE("single-step weights are positive and sum to 2 sqrt(h/pi)", "[abel]") {
  const TimeGrid grid(0.5, 1);
  const auto w = AbelWeights::build(grid);
  const auto row = w.row(1);
  REQUIRE(row.size() == 2);
  REQUIRE(row[0] > 0.0);
  REQUIRE(row[1] > 0.0);
  REQUIRE(std::abs(row[0] + row[1] - 2.0 * std::sqrt(0.5 / constants::pi)) < 1e-15);
  // diagonal weight (2/sqrt(pi)) (2/3) sqrt(h)
  REQUIRE(std::abs(row[1] - (4.0 / 3.0) * std::sqrt(0.5) / std::sqrt(constants::pi)) < 1e-15);
}

TEST_CASE("weights are nondecreasing towards the singular end", "[abel]") {
  const TimeGrid grid(2.0, 33);
  const auto w = AbelWeights::build(grid);
  for (std::size_t n = 2; n < grid.n_nodes(); ++n) {
    const auto row = w.row(n);
    for (std::size_t j = 1; j + 1 < row.size(); ++j) REQUIRE(row[j] <= row[j + 1] + 1e-15);
  }
}

TEST_CASE("exactness on random piecewise-linear inputs", "[abel]") {
  const TimeGrid grid(0.9, 24);
  const auto w = AbelWeights::build(grid);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<Complex> f(grid.n_nodes());
  for (auto& v : f) v = Complex(uni(rng), uni(rng));
  const auto If = half_integral(f, w);
  REQUIRE(If[0] == Complex(0.0, 0.0));
  for (std::size_t n = 1; n < f.size(); ++n) {
    const Complex exact = exact_half_integral_piecewise_linear(f, grid, static_cast<int>(n));
    INFO("node " << n);
    REQUIRE(std::abs(If[n] - exact) < 1e-13 * std::max(1.0, std::abs(exact)));
  }
}

TEST_CASE("I applied to a constant is 2 sqrt(t/pi)", "[abel]") {
  const TimeGrid grid(1.0, 40);
  const auto w = AbelWeights::build(grid);
  std::vector<Complex> one(grid.n_nodes(), Complex(1.0, 0.0));
  const auto I1 = half_integral(one, w);
  for (std::size_t n = 0; n < I1.size(); ++n)
    REQUIRE(std::abs(I1[n] - 2.0 * std::sqrt(grid.node(static_cast<int>(n)) / constants::pi)) <
            1e-13);
}

TEST_CASE("singular identity: analytic route is exactly the constant", "[abel]") {
  const TimeGrid grid(1.0, 16);
  const auto w = AbelWeights::build(grid);
  const Complex c(0.3, -1.2);
  const auto out = half_integral_singular(c, w);
  for (const Complex& v : out) REQUIRE(v == c);
  const auto zero = half_integral_singular(Complex(0.0, 0.0), w);
  for (const Complex& v : zero) REQUIRE(v == Complex(0.0, 0.0));
}

TEST_CASE("singular identity through raw weights: level and order", "[abel]") {
  auto run = [](int n_steps) {
    const TimeGrid grid(1.0, n_steps);
    const auto w = AbelWeights::build(grid);
    std::vector<Complex> f(grid.n_nodes());
    for (std::size_t n = 1; n < f.size(); ++n)
      f[n] = 1.0 / std::sqrt(constants::pi * grid.node(static_cast<int>(n)));
    const auto If = half_integral(with_extrapolated_origin(f), w);
    double dev = 0.0;
    for (std::size_t n = f.size() / 2; n < f.size(); ++n)
      dev = std::max(dev, std::abs(If[n] - 1.0));
    return dev;
  };
  const double e256 = run(256), e512 = run(512), e1024 = run(1024);
  REQUIRE(e256 < 5e-2);
  REQUIRE(std::log2(e256 / e512) >= 0.5);
  REQUIRE(std::log2(e512 / e1024) >= 0.5);
}

TEST_CASE("second iterate: I^2 f = int_0^t f for f = cos", "[abel]") {
  auto run = [](int n_steps) {
    const TimeGrid grid(1.0, n_steps);
    const auto w = AbelWeights::build(grid);
    std::vector<Complex> f(grid.n_nodes());
    for (std::size_t n = 0; n < f.size(); ++n) f[n] = std::cos(grid.node(static_cast<int>(n)));
    const auto iif = half_integral(half_integral(f, w), w);
    double dev = 0.0;
    for (std::size_t n = f.size() / 2; n < f.size(); ++n)
      dev = std::max(dev, std::abs(iif[n] - std::sin(grid.node(static_cast<int>(n)))));
    return dev;
  };
  const double e256 = run(256), e512 = run(512), e1024 = run(1024);
  REQUIRE(e1024 < 1e-3);
  REQUIRE(std::log2(e256 / e512) >= 1.4);
  REQUIRE(std::log2(e512 / e1024) >= 1.4);
}

TEST_CASE("half-order smoothing: output gains roughly half an index", "[abel][smoothing]") {
  // Rough input with Sobolev index ~0.8; the output's Gagliardo seminorm of
  // index 0.8 + 0.49 stays stable under refinement (qualitative check).
  auto seminorm_of_output = [](int n_steps) {
    const TimeGrid grid(1.0, n_steps);
    const auto w = AbelWeights::build(grid);
    const auto rough = synthesize_rough_gamma(99, 0.8, 2048, 1.0);
    std::vector<Complex> f(grid.n_nodes());
    for (std::size_t n = 0; n < f.size(); ++n) f[n] = rough(grid.node(static_cast<int>(n)));
    const auto If = half_integral(f, w);
    return gagliardo_seminorm(If, 0.0, 1.0, 0.8 + 0.49);
  };
  const double s512 = seminorm_of_output(512);
  const double s1024 = seminorm_of_output(1024);
  const double s2048 = seminorm_of_output(2048);
  REQUIRE(std::isfinite(s2048));
  // stable: growth per refinement keeps shrinking and stays under 12%
  const double g1 = s1024 / s512, g2 = s2048 / s1024;
  REQUIRE(g2 < 1.12);
  REQUIRE(g2 <= g1 + 0.02);
}

TEST_CASE("guards: grid mismatch and memory budget", "[abel]") {
  const TimeGrid grid(1.0, 8);
  const auto w = AbelWeights::build(grid);
  std::vector<Complex> wrong(5, Complex(1.0, 0.0));
  REQUIRE_THROWS_AS(half_integral(wrong, w), ValidationError);
  REQUIRE_THROWS_AS(AbelWeights::build(TimeGrid(1.0, 100000), /*max_bytes=*/1 << 20),
                    NumericalGuardError);
}
