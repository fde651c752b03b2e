#pragma once

/// Scenario JSON schema, CSV/binary exports and run manifests. All numeric text
/// output uses %.17g so repeated runs are byte-identical.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "deltaprime/pipeline.hpp"

namespace deltaprime {

using nlohmann::json;

namespace io_detail {

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline Complex complex_from_json(const json& j, const std::string& what) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2) return Complex(j[0].get<double>(), j[1].get<double>());
  throw ValidationError(what + ": expected a number or [re, im]");
}

inline json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

}  // namespace io_detail

inline GammaProfile gamma_from_json(const json& g, double t_final) {
  const std::string kind = g.at("kind").get<std::string>();
  const double offset = g.value("offset", 0.0);
  const double amplitude = g.value("amplitude", 1.0);
  GammaProfile prof;
  if (kind == "constant") {
    prof = GammaProfile::constant(g.at("value").get<double>());
  } else if (kind == "smooth_fourier") {
    const double omega0 = g.value("omega0", 2.0 * constants::pi / t_final);
    prof = GammaProfile::smooth_fourier(g.value("a0", 0.0), omega0,
                                        g.value("cos", std::vector<double>{}),
                                        g.value("sin", std::vector<double>{}));
  } else if (kind == "rough_fourier") {
    prof = synthesize_rough_gamma(g.at("seed").get<std::uint64_t>(),
                                  g.at("sobolev_index").get<double>(),
                                  g.at("n_modes").get<int>(), t_final);
  } else if (kind == "tabulated") {
    prof = GammaProfile::tabulated(g.at("times").get<std::vector<double>>(),
                                   g.at("values").get<std::vector<double>>());
  } else {
    throw ValidationError("gamma: unknown kind '" + kind + "'");
  }
  if (offset != 0.0 || amplitude != 1.0) prof = prof.with_affine(offset, amplitude);
  return prof;
}

inline json gamma_to_json(const GammaProfile& g) {
  json j;
  j["kind"] = to_string(g.kind());
  switch (g.kind()) {
    case GammaKind::constant:
      j["value"] = g.constant_value();
      break;
    case GammaKind::smooth_fourier:
      j["a0"] = g.a0();
      j["omega0"] = g.omega0();
      j["cos"] = g.cos_coeffs();
      j["sin"] = g.sin_coeffs();
      break;
    case GammaKind::rough_fourier:
      j["seed"] = g.seed();
      j["sobolev_index"] = g.sobolev_index();
      j["n_modes"] = g.n_modes();
      break;
    case GammaKind::tabulated:
      j["times"] = g.tab_times();
      j["values"] = g.tab_values();
      break;
  }
  if (g.kind() != GammaKind::constant &&
      (g.affine_offset() != 0.0 || g.affine_scale() != 1.0)) {
    j["offset"] = g.affine_offset();
    j["amplitude"] = g.affine_scale();
  }
  return j;
}

/// Parses {time:{t_final,n_steps}, space:{L,n_points}, gamma:{...}, datum:{...},
/// tolerances:{...}} plus optional frames/manufactured. The datum is completed
/// through the compatibility-enforcing constructor.
inline Scenario scenario_from_json(const json& root) {
  Scenario s;
  s.time_grid = TimeGrid(root.at("time").at("t_final").get<double>(),
                         root.at("time").at("n_steps").get<int>());
  s.spatial_grid = SpatialGrid(root.at("space").at("L").get<double>(),
                               root.at("space").at("n_points").get<int>());
  s.gamma = gamma_from_json(root.at("gamma"), s.time_grid.t_final());

  const json& d = root.at("datum");
  const Complex q0 = io_detail::complex_from_json(d.at("q0"), "datum.q0");
  const double gamma0 = d.contains("gamma0") ? d.at("gamma0").get<double>() : s.gamma(0.0);
  std::vector<GaussianTerm> terms;
  for (const json& tj : d.value("terms", json::array())) {
    GaussianTerm t;
    const std::string kind = tj.at("kind").get<std::string>();
    if (kind == "gaussian")
      t.kind = GaussianTerm::Kind::gaussian;
    else if (kind == "x_gaussian")
      t.kind = GaussianTerm::Kind::x_gaussian;
    else
      throw ValidationError("datum term: unknown kind '" + kind + "'");
    t.a = tj.at("a").get<double>();
    t.coef = io_detail::complex_from_json(tj.at("coef"), "datum term coef");
    terms.push_back(t);
  }
  s.datum = make_initial_datum(std::move(terms), q0, gamma0);
  if (d.contains("tabulated")) {
    std::vector<Complex> samples;
    for (const json& v : d.at("tabulated")) samples.push_back(io_detail::complex_from_json(v, "tabulated sample"));
    s.datum.set_tabulated(std::move(samples));
  }

  if (root.contains("tolerances"))
    for (const auto& [k, v] : root.at("tolerances").items())
      s.tolerances[k] = v.get<double>();
  if (root.contains("frames")) s.frame_times = root.at("frames").get<std::vector<double>>();
  if (root.contains("manufactured")) {
    ManufacturedSpec m;
    m.kind = root.at("manufactured").value("kind", "exp_it");
    if (m.kind != "exp_it") throw ValidationError("manufactured: unknown kind '" + m.kind + "'");
    s.manufactured = m;
  }
  return s;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file: " + path.string());
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("scenario parse error at byte " + std::to_string(e.byte) + ": " +
                          e.what());
  }
  try {
    return scenario_from_json(root);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("scenario schema error: ") + e.what());
  }
}

inline json scenario_to_json(const Scenario& s) {
  json root;
  root["time"] = {{"t_final", s.time_grid.t_final()}, {"n_steps", s.time_grid.n_steps()}};
  root["space"] = {{"L", s.spatial_grid.half_width()}, {"n_points", s.spatial_grid.n_points()}};
  root["gamma"] = gamma_to_json(s.gamma);
  json d;
  d["q0"] = io_detail::complex_to_json(s.datum.q0());
  d["gamma0"] = s.datum.gamma0();
  json terms = json::array();
  for (const auto& t : s.datum.terms())
    terms.push_back({{"kind", t.kind == GaussianTerm::Kind::gaussian ? "gaussian" : "x_gaussian"},
                     {"a", t.a},
                     {"coef", io_detail::complex_to_json(t.coef)}});
  d["terms"] = terms;
  root["datum"] = d;
  root["tolerances"] = s.tolerances;
  if (!s.frame_times.empty()) root["frames"] = s.frame_times;
  if (s.manufactured) root["manufactured"] = {{"kind", s.manufactured->kind}};
  return root;
}

// ---------------------------------------------------------------------------
// exports

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

inline std::string charge_csv(const ChargeTrajectory& traj) {
  std::ostringstream os;
  os << "t,re_q,im_q,re_qdot,im_qdot,re_f0,im_f0\n";
  for (std::size_t n = 0; n < traj.q.size(); ++n) {
    const Complex qd = traj.q_dot.empty() ? Complex(0, 0) : traj.q_dot[n];
    os << io_detail::num(traj.grid.node(static_cast<int>(n))) << ','
       << io_detail::num(traj.q[n].real()) << ',' << io_detail::num(traj.q[n].imag()) << ','
       << io_detail::num(qd.real()) << ',' << io_detail::num(qd.imag()) << ','
       << io_detail::num(traj.f0[n].real()) << ',' << io_detail::num(traj.f0[n].imag()) << '\n';
  }
  return os.str();
}

inline std::string frame_csv(const WavefunctionFrame& frame, const SpatialGrid& grid) {
  std::ostringstream os;
  os << "x,re_psi,im_psi,abs2_psi,re_phi,im_phi\n";
  for (int j = 0; j < grid.n_points(); ++j) {
    const auto js = static_cast<std::size_t>(j);
    os << io_detail::num(grid.node(j)) << ',' << io_detail::num(frame.psi[js].real()) << ','
       << io_detail::num(frame.psi[js].imag()) << ',' << io_detail::num(std::norm(frame.psi[js]))
       << ',' << io_detail::num(frame.phi[js].real()) << ','
       << io_detail::num(frame.phi[js].imag()) << '\n';
  }
  return os.str();
}

/// Raw row-major complex128 array, psi then phi, with a JSON sidecar naming
/// the layout and grids.
inline void write_frame_binary(const std::filesystem::path& stem, const WavefunctionFrame& frame,
                               const SpatialGrid& grid) {
  {
    std::ofstream out(stem.string() + ".bin", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + stem.string() + ".bin");
    auto dump = [&out](const std::vector<Complex>& v) {
      out.write(reinterpret_cast<const char*>(v.data()),
                static_cast<std::streamsize>(v.size() * sizeof(Complex)));
    };
    dump(frame.psi);
    dump(frame.phi);
  }
  json side;
  side["t"] = frame.t;
  side["layout"] = "complex128 interleaved, rows: psi, phi";
  side["n_points"] = grid.n_points();
  side["L"] = grid.half_width();
  side["file"] = stem.filename().string() + ".bin";
  write_text(stem.string() + ".json", side.dump(2) + "\n");
}

inline json diagnostics_to_json(const DiagnosticsReport& rep) {
  json j;
  j["frame_times"] = rep.frame_times;
  j["norm_ratio"] = rep.norm_ratio;
  j["max_norm_drift"] = rep.max_norm_drift;
  if (!rep.boundary_raw.empty()) {
    j["boundary"] = {{"raw_max", *std::max_element(rep.boundary_raw.begin(), rep.boundary_raw.end())},
                     {"smoothed_max", rep.max_smoothed_boundary}};
  }
  if (!rep.energy.empty()) {
    j["energy"] = rep.energy;
    j["energy_drift"] = rep.energy_drift;
  }
  j["source_route_deviation"] = rep.source_route_deviation;
  j["marching_dense_deviation"] = rep.marching_dense_deviation;
  j["gagliardo"] = rep.gagliardo;
  json reg = json::array();
  for (const auto& [lam, res] : rep.regularized) reg.push_back({{"lambda", lam}, {"residual", res}});
  j["regularized"] = reg;
  return j;
}

inline std::string identities_csv(const std::vector<IdentityRow>& rows) {
  std::ostringstream os;
  os << "name,value,tolerance,pass,note\n";
  for (const auto& r : rows)
    os << '"' << r.name << "\"," << io_detail::num(r.value) << ',' << io_detail::num(r.tolerance)
       << ',' << (r.pass ? 1 : 0) << ",\"" << r.note << "\"\n";
  return os.str();
}

inline std::string convergence_csv(const ConvergenceTable& table) {
  std::ostringstream os;
  os << "observable,n_steps,h,error,order\n";
  for (const auto& row : table.rows) {
    os << to_string(table.observable) << ',' << row.n_steps << ',' << io_detail::num(row.h) << ','
       << io_detail::num(row.error) << ',';
    if (std::isnan(row.order))
      os << "";
    else
      os << io_detail::num(row.order);
    os << '\n';
  }
  return os.str();
}

}  // namespace deltaprime
