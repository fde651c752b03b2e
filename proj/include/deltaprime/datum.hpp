#pragma once

/// Initial data psi0 = phi0 + q0 * half_sign with phi0 in a closed-form family of
/// Gaussians e^{-a x^2} and x e^{-a x^2}. The family keeps phi0'(0), the Fourier
/// transform and the free evolution analytic. Tabulated profiles are carried
/// through but validated only numerically.

#include <cmath>
#include <optional>
#include <vector>

#include "deltaprime/types.hpp"

namespace deltaprime {

struct GaussianTerm {
  enum class Kind { gaussian, x_gaussian };
  Kind kind = Kind::gaussian;
  double a = 1.0;  // width parameter, a > 0
  Complex coef{1.0, 0.0};
};

class InitialDatum {
 public:
  InitialDatum() = default;
  InitialDatum(std::vector<GaussianTerm> terms, Complex q0, double gamma0)
      : terms_(std::move(terms)), q0_(q0), gamma0_(gamma0) {
    for (const auto& t : terms_)
      if (!(t.a > 0.0)) throw ValidationError("InitialDatum: Gaussian width must be positive");
  }

  const std::vector<GaussianTerm>& terms() const { return terms_; }
  Complex q0() const { return q0_; }
  double gamma0() const { return gamma0_; }

  Complex phi0(double x) const {
    Complex v(0.0, 0.0);
    for (const auto& t : terms_) {
      const double g = std::exp(-t.a * x * x);
      v += t.coef * (t.kind == GaussianTerm::Kind::gaussian ? g : x * g);
    }
    return v;
  }

  Complex phi0_prime(double x) const {
    Complex v(0.0, 0.0);
    for (const auto& t : terms_) {
      const double g = std::exp(-t.a * x * x);
      if (t.kind == GaussianTerm::Kind::gaussian)
        v += t.coef * (-2.0 * t.a * x) * g;
      else
        v += t.coef * (1.0 - 2.0 * t.a * x * x) * g;
    }
    return v;
  }

  Complex phi0_second(double x) const {
    Complex v(0.0, 0.0);
    for (const auto& t : terms_) {
      const double g = std::exp(-t.a * x * x);
      if (t.kind == GaussianTerm::Kind::gaussian)
        v += t.coef * (4.0 * t.a * t.a * x * x - 2.0 * t.a) * g;
      else
        v += t.coef * (-2.0 * t.a * x) * (3.0 - 2.0 * t.a * x * x) * g;
    }
    return v;
  }

  /// phi0'(0) = sum of x-Gaussian coefficients (each contributes slope 1 at 0).
  Complex phi0_prime_at_zero() const {
    Complex v(0.0, 0.0);
    for (const auto& t : terms_)
      if (t.kind == GaussianTerm::Kind::x_gaussian) v += t.coef;
    return v;
  }

  /// Fourier transform F[phi0](k) = int e^{-ikx} phi0(x) dx, analytic per term:
  ///   e^{-a x^2}      -> sqrt(pi/a) e^{-k^2/(4a)}
  ///   x e^{-a x^2}    -> -i k/(2a) sqrt(pi/a) e^{-k^2/(4a)}
  Complex phi0_hat(double k) const {
    Complex v(0.0, 0.0);
    for (const auto& t : terms_) {
      const double base = std::sqrt(constants::pi / t.a) * std::exp(-k * k / (4.0 * t.a));
      if (t.kind == GaussianTerm::Kind::gaussian)
        v += t.coef * base;
      else
        v += t.coef * Complex(0.0, -k / (2.0 * t.a)) * base;
    }
    return v;
  }

  /// Largest width parameter; controls the Fourier support used in quadratures.
  double max_width() const {
    double a = 0.0;
    for (const auto& t : terms_) a = std::max(a, t.a);
    return a > 0.0 ? a : 1.0;
  }

  bool has_tabulated() const { return tabulated_.has_value(); }
  const std::vector<Complex>& tabulated() const { return *tabulated_; }
  void set_tabulated(std::vector<Complex> samples) { tabulated_ = std::move(samples); }

 private:
  std::vector<GaussianTerm> terms_;
  Complex q0_{0.0, 0.0};
  double gamma0_ = 0.0;
  std::optional<std::vector<Complex>> tabulated_;
};

/// Builds the datum from a base profile in the closed-form family, enforcing the
/// compatibility condition phi0'(0) = gamma0 * q0 constructively: a correction
/// term c * x e^{-x^2} with unit slope at the origin absorbs any mismatch.
inline InitialDatum make_initial_datum(std::vector<GaussianTerm> base, Complex q0, double gamma0) {
  Complex slope(0.0, 0.0);
  for (const auto& t : base)
    if (t.kind == GaussianTerm::Kind::x_gaussian) slope += t.coef;
  const Complex c = gamma0 * q0 - slope;
  if (c != Complex(0.0, 0.0))
    base.push_back(GaussianTerm{GaussianTerm::Kind::x_gaussian, 1.0, c});
  return InitialDatum(std::move(base), q0, gamma0);
}

}  // namespace deltaprime
