#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "deltaprime/special_functions.hpp"

using namespace deltaprime;
using Catch::Approx;

namespace {

// Independent oracle: composite Gauss-Legendre quadrature of e^{iu^2} on [0, z].
Complex quadrature_fresnel(double z, int panels = 64) {
  static const double gx[6] = {-0.9324695142031521, -0.6612093864662645, -0.2386191860831969,
                               0.2386191860831969,  0.6612093864662645,  0.9324695142031521};
  static const double gw[6] = {0.1713244923791704, 0.3607615730481386, 0.4679139345726910,
                               0.4679139345726910, 0.3607615730481386, 0.1713244923791704};
  Complex acc(0.0, 0.0);
  const double du = z / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * du;
    for (int i = 0; i < 6; ++i) {
      const double u = mid + 0.5 * du * gx[i];
      acc += gw[i] * std::exp(Complex(0.0, u * u));
    }
  }
  return 0.5 * du * acc;
}

}  // namespace

TEST_CASE("fresnel matches the independent quadrature oracle", "[fresnel]") {
  const Complex oracle = quadrature_fresnel(1.0);
  // frozen reference, computed from the oracle
  const Complex frozen(0.9045242379, 0.3102683017);
  REQUIRE(std::abs(oracle - frozen) < 1e-9);
  REQUIRE(std::abs(fresnel(1.0) - oracle) < 1e-12);

  for (double z : {0.2, 0.7, 2.0, 3.9, 4.1, 5.5, 9.0}) {
    INFO("z = " << z);
    REQUIRE(std::abs(fresnel(z) - quadrature_fresnel(z, 256)) < 1e-11);
  }
}

TEST_CASE("fresnel(0) is zero and fresnel is odd bitwise", "[fresnel]") {
  REQUIRE(fresnel(0.0) == Complex(0.0, 0.0));
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> uni(0.0, 20.0);
  for (int i = 0; i < 10000; ++i) {
    const double z = uni(rng);
    const Complex plus = fresnel(z);
    const Complex minus = fresnel(-z);
    REQUIRE(minus.real() == -plus.real());
    REQUIRE(minus.imag() == -plus.imag());
  }
}

TEST_CASE("fresnel tail bound |T(z)| <= 1/z on a log grid", "[fresnel]") {
  for (int i = 0; i < 100; ++i) {
    const double z = std::pow(10.0, 6.0 * i / 99.0);
    INFO("z = " << z);
    REQUIRE(std::abs(fresnel_tail(z)) <= 1.0 / z);
  }
}

TEST_CASE("series and large-argument branches agree at the switch point", "[fresnel]") {
  const double zs = detail::fresnel_switch;
  const Complex series = detail::fresnel_series(zs);
  const Complex via_cf = 0.5 * constants::sqrt_pi_i() - detail::fresnel_tail_cf(zs);
  REQUIRE(std::abs(series - via_cf) < 1e-10);
  // continued fraction and asymptotic expansion agree where both apply
  for (double z : {8.0, 12.0, 50.0}) {
    REQUIRE(std::abs(detail::fresnel_tail_cf(z) - detail::fresnel_tail_asymptotic(z)) < 1e-14);
  }
}

TEST_CASE("fresnel approaches sqrt(pi i)/2 at infinity", "[fresnel]") {
  const Complex limit = 0.5 * constants::sqrt_pi_i();
  REQUIRE(std::abs(limit - Complex(0.6266570687, 0.6266570687)) < 1e-9);
  REQUIRE(std::abs(fresnel(1e6) - limit) < 1e-6);
}

TEST_CASE("evolved step: oddness, origin, pointwise step recovery", "[evolved_step]") {
  REQUIRE(evolved_step(0.5, 0.0) == Complex(0.0, 0.0));
  REQUIRE(std::abs(evolved_step(1.0, 1e4) - 0.5) < 2e-4);   // tail ~ 1/z of the step
  REQUIRE(std::abs(evolved_step(1.0, -1e4) + 0.5) < 2e-4);
  REQUIRE(evolved_step(0.7, -1.3) == -evolved_step(0.7, 1.3));
  REQUIRE_THROWS_AS(evolved_step(0.0, 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(evolved_step(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("evolved step at t=1, x=2 equals the Fresnel closed form", "[evolved_step]") {
  const Complex expected = constants::inv_sqrt_pi_i() * quadrature_fresnel(1.0);
  REQUIRE(std::abs(evolved_step(1.0, 2.0) - expected) < 1e-12);
}

TEST_CASE("slope of the evolved step at the origin", "[evolved_step]") {
  // plug-in value with the principal branch
  const double t0 = 1.0 / (4.0 * constants::pi);
  REQUIRE(std::abs(evolved_step_slope_at_zero(t0) - std::polar(1.0, -constants::pi / 4.0)) <
          1e-14);
  REQUIRE(std::abs(std::abs(evolved_step_slope_at_zero(1.0)) - 1.0 / std::sqrt(4.0 * constants::pi)) <
          1e-14);
  // finite-difference oracle
  for (double t : {0.3, 1.0, 2.0}) {
    const double eps = 1e-5;
    const Complex fd = (evolved_step(t, eps) - evolved_step(t, -eps)) / (2.0 * eps);
    INFO("t = " << t);
    REQUIRE(std::abs(fd - evolved_step_slope_at_zero(t)) < 1e-8);
  }
}

TEST_CASE("time derivative of the evolved step", "[evolved_step]") {
  REQUIRE(evolved_step_dt(0.5, 0.0) == Complex(0.0, 0.0));
  REQUIRE(evolved_step_dt(0.5, -1.2) == -evolved_step_dt(0.5, 1.2));
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ut(0.2, 2.0), ux(0.1, 5.0);
  for (int i = 0; i < 25; ++i) {
    const double t = ut(rng), x = ux(rng), eps = 1e-6;
    const Complex fd = (evolved_step(t + eps, x) - evolved_step(t - eps, x)) / (2.0 * eps);
    const Complex an = evolved_step_dt(t, x);
    INFO("t = " << t << " x = " << x);
    REQUIRE(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(an)));
  }
}

TEST_CASE("free kernel: unimodular phase, plug-in value, normalization", "[free_kernel]") {
  for (double x : {0.0, 0.5, 3.0, 11.0})
    REQUIRE(std::abs(free_kernel(0.8, x)) == Approx(1.0 / std::sqrt(4.0 * constants::pi * 0.8)));
  REQUIRE(std::abs(free_kernel(1.0 / (4.0 * constants::pi), 0.0) -
                   std::polar(1.0, -constants::pi / 4.0)) < 1e-14);

  // int kernel dx = 1, checked by quadrature on a wide window; the truncation
  // tail scales like sqrt(t/pi)/X.
  const double t = 1.0, X = 400.0;
  const int n = 1 << 19;
  const double dx = 2.0 * X / n;
  Complex acc(0.0, 0.0);
  for (int j = 0; j <= n; ++j) {
    const double x = -X + j * dx;
    const double w = (j == 0 || j == n) ? 0.5 : 1.0;
    acc += w * free_kernel(t, x);
  }
  acc *= dx;
  REQUIRE(std::abs(acc - 1.0) < 5e-3);
}
