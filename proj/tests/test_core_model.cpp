#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "deltaprime/io.hpp"
#include "deltaprime/scenario.hpp"

using namespace deltaprime;
using Catch::Approx;

TEST_CASE("make_initial_datum enforces compatibility constructively", "[core]") {
  SECTION("empty base, q0 = 2, gamma0 = 1 gives 2 x e^{-x^2}") {
    const auto d = make_initial_datum({}, Complex(2.0, 0.0), 1.0);
    REQUIRE(d.phi0_prime_at_zero() == Complex(2.0, 0.0));
    REQUIRE(std::abs(d.phi0(0.7) - 2.0 * 0.7 * std::exp(-0.49)) < 1e-15);
  }
  SECTION("pure Gaussian with q0 = 0 needs no correction") {
    const auto d = make_initial_datum({GaussianTerm{GaussianTerm::Kind::gaussian, 1.0, {1.0, 0.0}}},
                                      Complex(0.0, 0.0), 5.0);
    REQUIRE(d.terms().size() == 1);
    REQUIRE(d.phi0_prime_at_zero() == Complex(0.0, 0.0));
  }
  SECTION("gamma0 = 0 with q0 = 1 forces slope zero") {
    const auto d = make_initial_datum({GaussianTerm{GaussianTerm::Kind::gaussian, 1.0, {1.0, 0.0}}},
                                      Complex(1.0, 0.0), 0.0);
    REQUIRE(d.phi0_prime_at_zero() == Complex(0.0, 0.0));
  }
  SECTION("generic complex correction lands within 1e-12") {
    const auto d = make_initial_datum(
        {GaussianTerm{GaussianTerm::Kind::x_gaussian, 2.0, {0.3, -0.4}},
         GaussianTerm{GaussianTerm::Kind::gaussian, 0.5, {1.0, 0.2}}},
        Complex(0.7, 0.1), 1.5);
    REQUIRE(std::abs(d.phi0_prime_at_zero() - d.gamma0() * d.q0()) <= 1e-12);
  }
}

TEST_CASE("datum derivatives and Fourier transform are consistent", "[core]") {
  const auto d = make_initial_datum(
      {GaussianTerm{GaussianTerm::Kind::gaussian, 1.3, {0.8, 0.0}},
       GaussianTerm{GaussianTerm::Kind::x_gaussian, 0.7, {0.0, 0.5}}},
      Complex(1.0, -0.5), 2.0);
  const double eps = 1e-6;
  for (double x : {-1.7, 0.0, 0.4, 2.2}) {
    const Complex fd1 = (d.phi0(x + eps) - d.phi0(x - eps)) / (2.0 * eps);
    const Complex fd2 = (d.phi0(x + eps) - 2.0 * d.phi0(x) + d.phi0(x - eps)) / (eps * eps);
    REQUIRE(std::abs(fd1 - d.phi0_prime(x)) < 1e-8);
    REQUIRE(std::abs(fd2 - d.phi0_second(x)) < 2e-4);
  }
  // transform oracle by quadrature
  for (double k : {0.0, 1.1, 3.5}) {
    Complex acc(0.0, 0.0);
    const double X = 12.0, dx = 1e-3;
    const int n = static_cast<int>(2 * X / dx);
    for (int j = 0; j <= n; ++j) {
      const double x = -X + j * dx;
      const double w = (j == 0 || j == n) ? 0.5 : 1.0;
      acc += w * d.phi0(x) * std::polar(1.0, -k * x);
    }
    acc *= dx;
    REQUIRE(std::abs(acc - d.phi0_hat(k)) < 1e-8);
  }
}

TEST_CASE("validate_scenario reports named violations", "[core]") {
  Scenario s;
  s.time_grid = TimeGrid(1.0, 64);
  s.spatial_grid = SpatialGrid(20.0, 256);
  s.gamma = GammaProfile::constant(1.0);
  s.datum = make_initial_datum({}, Complex(1.0, 0.0), 1.0);
  REQUIRE(validate_scenario(s).empty());
  // idempotent and side-effect free
  REQUIRE(validate_scenario(s).empty());

  SECTION("gamma0 mismatch") {
    s.gamma = GammaProfile::constant(2.0);
    const auto bad = validate_scenario(s);
    REQUIRE(bad.size() >= 1);
    REQUIRE(bad[0].find("gamma0 mismatch") != std::string::npos);
  }
  SECTION("odd spatial grid is rejected at validation") {
    // SpatialGrid's constructor refuses odd sizes outright
    REQUIRE_THROWS_AS(SpatialGrid(20.0, 255), ValidationError);
  }
  SECTION("broken compatibility is reported") {
    s.datum = InitialDatum({GaussianTerm{GaussianTerm::Kind::x_gaussian, 1.0, {0.5, 0.0}}},
                           Complex(1.0, 0.0), 1.0);
    const auto bad = validate_scenario(s);
    REQUIRE(bad.size() == 1);
    REQUIRE(bad[0].find("compatibility") != std::string::npos);
  }
}

TEST_CASE("rough gamma synthesis: determinism, range checks, decay", "[core]") {
  REQUIRE_THROWS_AS(synthesize_rough_gamma(1, 0.8, 0, 1.0), ValidationError);
  REQUIRE_THROWS_AS(synthesize_rough_gamma(1, 0.4, 8, 1.0), ValidationError);
  REQUIRE_THROWS_AS(synthesize_rough_gamma(1, 1.6, 8, 1.0), ValidationError);

  const auto a = synthesize_rough_gamma(2026, 0.8, 512, 1.0);
  const auto b = synthesize_rough_gamma(2026, 0.8, 512, 1.0);
  for (int i = 0; i <= 1000; ++i) {
    const double t = i / 1000.0;
    REQUIRE(a(t) == b(t));  // bit-identical across constructions
  }
  const auto c = synthesize_rough_gamma(2027, 0.8, 512, 1.0);
  bool differs = false;
  for (int i = 0; i <= 100 && !differs; ++i) differs = a(i / 100.0) != c(i / 100.0);
  REQUIRE(differs);

  // single mode is a plain cosine
  const auto one = synthesize_rough_gamma(7, 0.8, 1, 2.0);
  REQUIRE(std::abs(one(0.0) - one(2.0)) < 1e-12);
}

TEST_CASE("scenario JSON round trip preserves the run", "[core][io]") {
  Scenario s;
  s.time_grid = TimeGrid(1.0, 128);
  s.spatial_grid = SpatialGrid(30.0, 512);
  s.gamma = GammaProfile::smooth_fourier(1.0, 2.0 * constants::pi, {}, {0.5});
  s.datum = make_initial_datum({GaussianTerm{GaussianTerm::Kind::x_gaussian, 1.0, {1.0, 0.0}},
                                GaussianTerm{GaussianTerm::Kind::gaussian, 1.0, {1.0, 0.0}}},
                               Complex(1.0, 0.0), 1.0);
  s.frame_times = {0.0, 0.5, 1.0};
  const json j = scenario_to_json(s);
  const Scenario r = scenario_from_json(j);
  REQUIRE(r.time_grid == s.time_grid);
  REQUIRE(r.spatial_grid == s.spatial_grid);
  REQUIRE(r.datum.q0() == s.datum.q0());
  REQUIRE(r.datum.terms().size() == s.datum.terms().size());
  for (double t : {0.0, 0.3, 0.9}) REQUIRE(r.gamma(t) == Approx(s.gamma(t)).margin(1e-15));
  REQUIRE(validate_scenario(r).empty());

  // rough profiles survive the round trip bit-identically via the seed
  s.gamma = synthesize_rough_gamma(42, 0.8, 64, 1.0);
  s.datum = make_initial_datum({}, Complex(1.0, 0.0), s.gamma(0.0));
  const Scenario rr = scenario_from_json(scenario_to_json(s));
  for (double t : {0.0, 0.25, 0.77}) REQUIRE(rr.gamma(t) == s.gamma(t));
}

TEST_CASE("malformed scenario files fail with location info", "[core][io]") {
  namespace fs = std::filesystem;
  const fs::path p = fs::temp_directory_path() / "dp_bad_scenario.json";
  write_text(p, "{ \"time\": { \"t_final\": 1.0, ");
  try {
    load_scenario(p);
    FAIL("expected a parse failure");
  } catch (const ValidationError& e) {
    REQUIRE(std::string(e.what()).find("byte") != std::string::npos);
  }
  fs::remove(p);
}
