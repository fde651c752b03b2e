#pragma once

/// End-to-end orchestration: charge solve, frame reconstruction, diagnostics,
/// and grid-refinement studies.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "deltaprime/diagnostics.hpp"
#include "deltaprime/scenario.hpp"

namespace deltaprime {

struct PipelineOptions {
  DuhamelRule rule = DuhamelRule::trapezoid;
  int default_frames = 17;              // equispaced on [0, T] when the scenario names none
  bool dense_equivalence_check = true;  // skipped above dense_check_cap steps
  int dense_check_cap = 4096;
  bool compute_boundary = true;
  bool compute_energy = true;           // only applies to constant gamma
  bool compute_hamiltonian = false;     // h_psi per frame
  bool regularized_checks = true;
  std::size_t weight_budget_bytes = std::size_t(6) << 30;
};

struct PipelineResult {
  ChargeTrajectory traj;
  std::vector<WavefunctionFrame> frames;
  DiagnosticsReport report;
  std::map<std::string, double> timings_ms;
};

namespace detail {

class StageClock {
 public:
  explicit StageClock(std::map<std::string, double>& sink) : sink_(sink) {}
  template <typename F>
  auto time(const std::string& name, F&& f) -> decltype(f()) {
    const auto t0 = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      sink_[name] = ms_since(t0);
    } else {
      auto r = f();
      sink_[name] = ms_since(t0);
      return r;
    }
  }

 private:
  static double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
  }
  std::map<std::string, double>& sink_;
};

inline std::vector<int> frame_nodes(const Scenario& s, int default_frames) {
  std::vector<double> times = s.frame_times;
  if (times.empty()) {
    times.resize(static_cast<std::size_t>(default_frames));
    for (int i = 0; i < default_frames; ++i)
      times[static_cast<std::size_t>(i)] =
          s.time_grid.t_final() * i / std::max(1, default_frames - 1);
  }
  std::vector<int> nodes;
  for (double t : times) {
    int n = static_cast<int>(std::lround(t / s.time_grid.step()));
    n = std::clamp(n, 0, s.time_grid.n_steps());
    if (nodes.empty() || nodes.back() != n) nodes.push_back(n);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

inline std::vector<Complex> compute_trace(const Scenario& s) {
  if (s.datum.has_tabulated())
    return trace_route_fourier_tabulated(s.datum, s.spatial_grid, s.time_grid);
  return trace_route_fourier(s.datum, s.time_grid);
}

}  // namespace detail

inline PipelineResult run_pipeline(const Scenario& s, const PipelineOptions& opts = {}) {
  {
    const auto bad = validate_scenario(s);
    if (!bad.empty()) {
      std::string msg = "scenario invalid:";
      for (const auto& b : bad) msg += "\n  - " + b;
      throw ValidationError(msg);
    }
  }
  PipelineResult result;
  detail::StageClock clock(result.timings_ms);

  const auto weights = clock.time(
      "abel_weights", [&] { return AbelWeights::build(s.time_grid, opts.weight_budget_bytes); });
  const auto trace = clock.time("boundary_trace", [&] { return detail::compute_trace(s); });

  auto f0_regular = clock.time("source_regular", [&] {
    return charge_source(s.datum, weights, SourceRoute::regular_part, trace);
  });
  const auto f0_full = clock.time("source_full", [&] {
    return charge_source(s.datum, weights, SourceRoute::full_datum, trace);
  });
  double route_dev = 0.0;
  for (std::size_t n = 0; n < f0_regular.size(); ++n)
    route_dev = std::max(route_dev, std::abs(f0_regular[n] - f0_full[n]));
  result.report.source_route_deviation = route_dev;

  result.traj = clock.time("charge_marching",
                           [&] { return solve_charge_marching(f0_regular, s.gamma, weights); });
  if (opts.dense_equivalence_check && s.time_grid.n_steps() <= opts.dense_check_cap) {
    const auto dense = clock.time("charge_dense", [&] {
      return solve_charge_dense(f0_regular, s.gamma, weights, opts.weight_budget_bytes);
    });
    double dev = 0.0;
    for (std::size_t n = 0; n < dense.q.size(); ++n) {
      const double scale = std::max(1.0, std::abs(result.traj.q[n]));
      dev = std::max(dev, std::abs(dense.q[n] - result.traj.q[n]) / scale);
    }
    result.report.marching_dense_deviation = dev;
  }
  attach_time_derivative(result.traj);

  SpectralPropagator prop(s.spatial_grid, s.tol("boundary_mass"));
  const bool energy_wanted = opts.compute_energy && s.gamma.kind() == GammaKind::constant;

  clock.time("frames", [&] {
    for (int n : detail::frame_nodes(s, opts.default_frames)) {
      auto fr = make_frame(result.traj, s.datum, prop, n, opts.rule);
      if (opts.compute_hamiltonian) fr.h_psi = hamiltonian_action(fr, prop);
      if (energy_wanted) fr.phi_x = reconstruct_phi_x(result.traj, s.datum, prop, n);
      result.frames.push_back(std::move(fr));
    }
  });

  clock.time("diagnostics", [&] {
    auto& rep = result.report;
    for (const auto& fr : result.frames) rep.frame_times.push_back(fr.t);
    rep.norm_ratio = norm_conservation(result.frames, s.spatial_grid);
    for (double r : rep.norm_ratio) rep.max_norm_drift = std::max(rep.max_norm_drift, std::abs(r - 1.0));

    if (opts.compute_boundary && !s.datum.has_tabulated()) {
      const auto br = boundary_residual(result.traj, s.datum, s.gamma, weights,
                                        s.spatial_grid.dx(), opts.rule);
      rep.boundary_raw = br.raw;
      rep.boundary_smoothed = br.smoothed;
      rep.boundary_times = result.traj.grid.nodes();
      for (double v : br.smoothed) rep.max_smoothed_boundary = std::max(rep.max_smoothed_boundary, v);
    }
    if (energy_wanted) {
      rep.energy = energy_trace(result.frames, s.spatial_grid, s.gamma);
      double lo = rep.energy[0], hi = rep.energy[0];
      for (double e : rep.energy) {
        lo = std::min(lo, e);
        hi = std::max(hi, e);
      }
      const double scale = std::max(1.0, std::abs(rep.energy[0]));
      rep.energy_drift = (hi - lo) / scale;
    }
    {
      const auto samples = s.gamma.sample(result.traj.grid.nodes());
      std::vector<Complex> cg(samples.begin(), samples.end());
      rep.gagliardo["gamma_H0.75"] = gagliardo_seminorm(cg, 0.0, s.time_grid.t_final(), 0.75);
    }
    if (opts.regularized_checks && !result.frames.empty()) {
      const auto& last = result.frames.back();
      for (double lam : {0.1, 1.0, 10.0}) {
        const auto rd = regularized_decompose(last, s.spatial_grid, lam, s.gamma(last.t));
        rep.regularized.emplace_back(lam, rd.boundary_residual);
      }
    }
  });
  return result;
}

enum class Observable { charge, norm_drift, boundary };

inline std::string to_string(Observable o) {
  switch (o) {
    case Observable::charge: return "charge";
    case Observable::norm_drift: return "norm_drift";
    case Observable::boundary: return "boundary";
  }
  return "?";
}

struct ConvergenceRow {
  int n_steps = 0;
  double h = 0.0;
  double error = 0.0;
  double order = std::numeric_limits<double>::quiet_NaN();  // vs previous row
};

struct ConvergenceTable {
  Observable observable = Observable::charge;
  std::vector<ConvergenceRow> rows;

  double min_order() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < rows.size(); ++i) m = std::min(m, rows[i].order);
    return m;
  }
};

/// Runs the pipeline at h, h/2, ..., h/2^{levels-1} and reports one error per
/// level plus observed orders between consecutive levels. `levels` must be >= 2.
/// The charge observable uses the exact manufactured solution when the scenario
/// declares one, otherwise an extra twice-refined reference run.
inline ConvergenceTable convergence_study(const Scenario& scenario, int levels,
                                          Observable observable,
                                          const PipelineOptions& base_opts = {}) {
  if (levels < 2) throw ValidationError("convergence_study: need at least 2 refinement levels");
  ConvergenceTable table;
  table.observable = observable;

  auto scenario_at = [&](int k) {
    Scenario s = scenario;
    s.time_grid = TimeGrid(scenario.time_grid.t_final(), scenario.time_grid.n_steps() << k);
    return s;
  };

  std::vector<double> errors(static_cast<std::size_t>(levels), 0.0);

  if (observable == Observable::charge) {
    const bool manufactured = scenario.manufactured.has_value();
    const int runs = manufactured ? levels : levels + 1;  // self-reference needs one finer run
    std::vector<std::vector<Complex>> charges(static_cast<std::size_t>(runs));
    for (int k = 0; k < runs; ++k) {
      const Scenario sk = scenario_at(k);
      const auto w = AbelWeights::build(sk.time_grid, base_opts.weight_budget_bytes);
      const auto f0 = manufactured
                          ? manufactured_source([](double t) { return std::exp(Complex(0.0, t)); },
                                                sk.gamma, sk.time_grid)
                          : charge_source(sk.datum, w, SourceRoute::regular_part);
      charges[static_cast<std::size_t>(k)] = solve_charge_marching(f0, sk.gamma, w).q;
    }
    for (int k = 0; k < levels; ++k) {
      const auto& q = charges[static_cast<std::size_t>(k)];
      double err = 0.0;
      if (manufactured) {
        const TimeGrid g(scenario.time_grid.t_final(), scenario.time_grid.n_steps() << k);
        for (std::size_t n = 0; n < q.size(); ++n)
          err = std::max(err,
                         std::abs(q[n] - std::exp(Complex(0.0, g.node(static_cast<int>(n))))));
      } else {
        const auto& ref = charges[static_cast<std::size_t>(runs - 1)];
        const std::size_t stride = std::size_t(1) << (runs - 1 - k);
        for (std::size_t n = 0; n < q.size(); ++n)
          err = std::max(err, std::abs(q[n] - ref[n * stride]));
      }
      errors[static_cast<std::size_t>(k)] = err;
    }
  } else {
    for (int k = 0; k < levels; ++k) {
      const Scenario sk = scenario_at(k);
      PipelineOptions opts = base_opts;
      opts.dense_equivalence_check = false;
      opts.compute_hamiltonian = false;
      opts.compute_energy = false;
      opts.regularized_checks = false;
      opts.compute_boundary = (observable == Observable::boundary);
      const auto run = run_pipeline(sk, opts);
      errors[static_cast<std::size_t>(k)] = (observable == Observable::norm_drift)
                                                ? run.report.max_norm_drift
                                                : run.report.max_smoothed_boundary;
    }
  }

  for (int k = 0; k < levels; ++k) {
    ConvergenceRow row;
    row.n_steps = scenario.time_grid.n_steps() << k;
    row.h = scenario.time_grid.t_final() / row.n_steps;
    row.error = errors[static_cast<std::size_t>(k)];
    if (k > 0 && errors[static_cast<std::size_t>(k)] > 0.0)
      row.order = std::log2(errors[static_cast<std::size_t>(k - 1)] /
                            errors[static_cast<std::size_t>(k)]);
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace deltaprime
