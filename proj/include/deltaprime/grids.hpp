#pragma once

#include <cstddef>
#include <vector>

#include "deltaprime/types.hpp"

namespace deltaprime {

/// Uniform time grid t_n = n*h on [0, t_final], h = t_final/n_steps.
class TimeGrid {
 public:
  TimeGrid() = default;
  TimeGrid(double t_final, int n_steps) : t_final_(t_final), n_steps_(n_steps) {
    if (!(t_final > 0.0)) throw ValidationError("TimeGrid: t_final must be positive");
    if (n_steps < 1) throw ValidationError("TimeGrid: n_steps must be >= 1");
    h_ = t_final / n_steps;
  }

  double t_final() const { return t_final_; }
  int n_steps() const { return n_steps_; }
  std::size_t n_nodes() const { return static_cast<std::size_t>(n_steps_) + 1; }
  double step() const { return h_; }
  double node(int n) const { return n * h_; }

  std::vector<double> nodes() const {
    std::vector<double> t(n_nodes());
    for (std::size_t n = 0; n < t.size(); ++n) t[n] = node(static_cast<int>(n));
    return t;
  }

  TimeGrid refined(int factor = 2) const { return TimeGrid(t_final_, n_steps_ * factor); }

  bool operator==(const TimeGrid& o) const {
    return t_final_ == o.t_final_ && n_steps_ == o.n_steps_;
  }

 private:
  double t_final_ = 1.0;
  int n_steps_ = 1;
  double h_ = 1.0;
};

/// Uniform spatial grid x_j = (2j - n)*(L/n) on [-L, L), j = 0..n-1.
/// n is even so x = 0 is hit exactly at j = n/2.
class SpatialGrid {
 public:
  SpatialGrid() = default;
  SpatialGrid(double half_width, int n_points) : L_(half_width), n_(n_points) {
    if (!(L_ > 0.0)) throw ValidationError("SpatialGrid: half_width must be positive");
    if (n_ < 2 || n_ % 2 != 0) throw ValidationError("SpatialGrid: n_points must be even and >= 2");
  }

  double half_width() const { return L_; }
  int n_points() const { return n_; }
  double dx() const { return 2.0 * L_ / n_; }
  double node(int j) const { return (2.0 * j - n_) * (L_ / n_); }
  int zero_index() const { return n_ / 2; }

  std::vector<double> nodes() const {
    std::vector<double> x(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j) x[static_cast<std::size_t>(j)] = node(j);
    return x;
  }

  bool operator==(const SpatialGrid& o) const { return L_ == o.L_ && n_ == o.n_; }

 private:
  double L_ = 40.0;
  int n_ = 4096;
};

}  // namespace deltaprime
