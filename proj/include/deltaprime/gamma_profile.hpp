#pragma once

/// Real coupling profiles gamma(t): constant, smooth Fourier series, synthesized
/// rough Fourier series with prescribed Sobolev decay, and tabulated samples.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "deltaprime/types.hpp"

namespace deltaprime {

enum class GammaKind { constant, smooth_fourier, rough_fourier, tabulated };

inline std::string to_string(GammaKind k) {
  switch (k) {
    case GammaKind::constant: return "constant";
    case GammaKind::smooth_fourier: return "smooth_fourier";
    case GammaKind::rough_fourier: return "rough_fourier";
    case GammaKind::tabulated: return "tabulated";
  }
  return "?";
}

class GammaProfile {
 public:
  GammaProfile() : GammaProfile(constant(0.0)) {}

  static GammaProfile constant(double value) {
    GammaProfile g;
    g.kind_ = GammaKind::constant;
    g.offset_ = value;
    return g;
  }

  /// gamma(t) = a0 + sum_m cos_m cos((m+1) w0 t) + sin_m sin((m+1) w0 t).
  static GammaProfile smooth_fourier(double a0, double omega0, std::vector<double> cos_coeffs,
                                     std::vector<double> sin_coeffs) {
    GammaProfile g;
    g.kind_ = GammaKind::smooth_fourier;
    g.offset_ = a0;
    g.omega0_ = omega0;
    g.cos_ = std::move(cos_coeffs);
    g.sin_ = std::move(sin_coeffs);
    return g;
  }

  static GammaProfile tabulated(std::vector<double> times, std::vector<double> values) {
    if (times.size() != values.size() || times.size() < 2)
      throw ValidationError("GammaProfile: tabulated profile needs >= 2 matching samples");
    for (std::size_t i = 1; i < times.size(); ++i)
      if (!(times[i] > times[i - 1]))
        throw ValidationError("GammaProfile: tabulated times must be strictly increasing");
    GammaProfile g;
    g.kind_ = GammaKind::tabulated;
    g.tab_t_ = std::move(times);
    g.tab_v_ = std::move(values);
    return g;
  }

  GammaKind kind() const { return kind_; }

  /// Affine post-transform offset + scale * (series); identity by default.
  GammaProfile with_affine(double offset, double scale) const {
    GammaProfile g = *this;
    if (kind_ == GammaKind::constant) {
      g.offset_ = offset + scale * offset_;
    } else {
      g.affine_offset_ = offset + scale * affine_offset_;
      g.affine_scale_ = scale * affine_scale_;
    }
    return g;
  }

  double operator()(double t) const {
    switch (kind_) {
      case GammaKind::constant:
        return offset_;
      case GammaKind::smooth_fourier: {
        double v = offset_;
        for (std::size_t m = 0; m < cos_.size(); ++m)
          v += cos_[m] * std::cos((m + 1) * omega0_ * t);
        for (std::size_t m = 0; m < sin_.size(); ++m)
          v += sin_[m] * std::sin((m + 1) * omega0_ * t);
        return affine_offset_ + affine_scale_ * v;
      }
      case GammaKind::rough_fourier: {
        double v = 0.0;
        for (std::size_t m = 0; m < cos_.size(); ++m)
          v += cos_[m] * std::cos((m + 1) * omega0_ * t + phase_[m]);
        return affine_offset_ + affine_scale_ * v;
      }
      case GammaKind::tabulated: {
        if (t <= tab_t_.front()) return tab_v_.front();
        if (t >= tab_t_.back()) return tab_v_.back();
        std::size_t lo = 0, hi = tab_t_.size() - 1;
        while (hi - lo > 1) {
          const std::size_t mid = (lo + hi) / 2;
          (tab_t_[mid] <= t ? lo : hi) = mid;
        }
        const double w = (t - tab_t_[lo]) / (tab_t_[lo + 1] - tab_t_[lo]);
        return (1.0 - w) * tab_v_[lo] + w * tab_v_[lo + 1];
      }
    }
    return 0.0;
  }

  std::vector<double> sample(const std::vector<double>& times) const {
    std::vector<double> v(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) v[i] = (*this)(times[i]);
    return v;
  }

  // Descriptive accessors used by serialization and validation.
  double constant_value() const { return offset_; }
  double a0() const { return offset_; }
  double omega0() const { return omega0_; }
  const std::vector<double>& cos_coeffs() const { return cos_; }
  const std::vector<double>& sin_coeffs() const { return sin_; }
  const std::vector<double>& tab_times() const { return tab_t_; }
  const std::vector<double>& tab_values() const { return tab_v_; }
  double affine_offset() const { return affine_offset_; }
  double affine_scale() const { return affine_scale_; }
  std::uint64_t seed() const { return seed_; }
  double sobolev_index() const { return sobolev_index_; }
  int n_modes() const { return static_cast<int>(cos_.size()); }

  friend GammaProfile synthesize_rough_gamma(std::uint64_t, double, int, double);

 private:
  GammaKind kind_ = GammaKind::constant;
  double offset_ = 0.0;
  double omega0_ = 0.0;
  std::vector<double> cos_, sin_, phase_;
  std::vector<double> tab_t_, tab_v_;
  double affine_offset_ = 0.0;
  double affine_scale_ = 1.0;
  std::uint64_t seed_ = 0;
  double sobolev_index_ = 0.0;
};

/// Real truncated Fourier series on [0, T] with |c_m| = m^{-(nu + 1/2 + 0.01)}
/// and seeded uniform phases; the decay places the series in H^{nu + 0.01 - eps}
/// of (0, T) for every eps > 0, so it just clears the index nu. Deterministic for
/// a given seed.
inline GammaProfile synthesize_rough_gamma(std::uint64_t seed, double sobolev_index, int n_modes,
                                           double T) {
  if (!(sobolev_index > 0.5 && sobolev_index < 1.5))
    throw ValidationError("synthesize_rough_gamma: sobolev_index must lie in (1/2, 3/2)");
  if (n_modes < 1) throw ValidationError("synthesize_rough_gamma: n_modes must be >= 1");
  if (!(T > 0.0)) throw ValidationError("synthesize_rough_gamma: T must be positive");
  const double p = sobolev_index + 0.5 + 0.01;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 2.0 * constants::pi);
  GammaProfile g;
  g.kind_ = GammaKind::rough_fourier;
  g.omega0_ = 2.0 * constants::pi / T;
  g.cos_.resize(static_cast<std::size_t>(n_modes));
  g.phase_.resize(static_cast<std::size_t>(n_modes));
  for (int m = 1; m <= n_modes; ++m) {
    g.cos_[static_cast<std::size_t>(m - 1)] = std::pow(static_cast<double>(m), -p);
    g.phase_[static_cast<std::size_t>(m - 1)] = uni(rng);
  }
  g.seed_ = seed;
  g.sobolev_index_ = sobolev_index;
  return g;
}

}  // namespace deltaprime
