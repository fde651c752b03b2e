#pragma once

/// A Scenario bundles the full problem description: grids, coupling profile,
/// initial datum and named tolerances.

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "deltaprime/datum.hpp"
#include "deltaprime/gamma_profile.hpp"
#include "deltaprime/grids.hpp"

namespace deltaprime {

inline std::map<std::string, double> default_tolerances() {
  return {
      {"boundary_mass", 1e-8},        // max |psi| allowed at the window edges
      {"norm_drift", 1e-3},           // unitarity witness budget
      {"boundary_residual", 1e-3},    // smoothed boundary-condition residual
      {"energy_drift", 1e-2},         // relative drift of the quadratic form
      {"identity_tol", 1e-10},        // analytic identity rows
      {"raw_identity_tol", 5e-2},     // product-weight route for the singular identity
      {"order_floor_charge", 1.4},
      {"order_floor_drift", 1.0},
      {"compat_tol", 1e-12},          // |phi0'(0) - gamma0 q0|
      {"route_tol", 5e-3},            // source route disagreement budget
      {"equivalence_tol", 1e-12},     // marching vs dense triangular solve
  };
}

struct ManufacturedSpec {
  // q*(t) = e^{it}; the only manufactured family shipped.
  std::string kind = "exp_it";
};

struct Scenario {
  TimeGrid time_grid;
  SpatialGrid spatial_grid;
  GammaProfile gamma;
  InitialDatum datum;
  std::map<std::string, double> tolerances = default_tolerances();
  std::vector<double> frame_times;  // empty -> pipeline default
  std::optional<ManufacturedSpec> manufactured;

  double tol(const std::string& name) const {
    auto it = tolerances.find(name);
    if (it == tolerances.end()) {
      auto d = default_tolerances();
      auto jt = d.find(name);
      if (jt == d.end()) throw ValidationError("unknown tolerance: " + name);
      return jt->second;
    }
    return it->second;
  }
};

namespace detail {
inline std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}
}  // namespace detail

/// Returns the list of violated invariants (empty means valid). Never throws;
/// each entry names the failed invariant and the offending value.
inline std::vector<std::string> validate_scenario(const Scenario& s) {
  std::vector<std::string> bad;
  if (!(s.time_grid.t_final() > 0.0)) bad.push_back("time grid: t_final must be positive");
  if (s.time_grid.n_steps() < 1) bad.push_back("time grid: n_steps must be >= 1");
  if (!(s.spatial_grid.half_width() > 0.0)) bad.push_back("spatial grid: half_width must be positive");
  if (s.spatial_grid.n_points() % 2 != 0) bad.push_back("spatial grid size must be even");
  if (s.spatial_grid.n_points() < 16) bad.push_back("spatial grid: n_points too small (< 16)");

  const double g0 = s.gamma(0.0);
  if (std::abs(s.datum.gamma0() - g0) > 1e-12)
    bad.push_back("gamma0 mismatch: " + detail::fmt_num(s.datum.gamma0()) + " vs " +
                  detail::fmt_num(g0));

  if (s.datum.has_tabulated()) {
    if (static_cast<int>(s.datum.tabulated().size()) != s.spatial_grid.n_points())
      bad.push_back("tabulated datum: sample count differs from spatial grid");
    if (!all_finite(s.datum.tabulated())) bad.push_back("tabulated datum: non-finite samples");
  } else {
    const Complex mismatch = s.datum.phi0_prime_at_zero() - s.datum.gamma0() * s.datum.q0();
    const double ctol =
        s.tolerances.count("compat_tol") ? s.tolerances.at("compat_tol") : 1e-12;
    if (std::abs(mismatch) > ctol)
      bad.push_back("compatibility violated: |phi0'(0) - gamma0 q0| = " +
                    detail::fmt_num(std::abs(mismatch)));
  }

  for (double tf : s.frame_times)
    if (tf < 0.0 || tf > s.time_grid.t_final() + 1e-15)
      bad.push_back("frame time outside [0, t_final]: " + detail::fmt_num(tf));

  for (const auto& [k, v] : s.tolerances)
    if (!(v > 0.0)) bad.push_back("tolerance " + k + " must be positive");
  return bad;
}

}  // namespace deltaprime
