/// Command-line driver. Subcommands:
///   run        solve a scenario, export charge/frames/diagnostics/manifest
///   identities run the built-in identity suite
///   converge   grid-refinement study for a scenario
///   validate   parse and validate a scenario file
/// Exit codes: 0 success, 1 identity/convergence floor failure,
/// 2 validation or usage failure, 3 numerical guard tripped.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "deltaprime/deltaprime.hpp"

namespace fs = std::filesystem;
using namespace deltaprime;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSuiteFail = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumericalGuard = 3;

json args_json(const std::string& scenario, const std::string& out_dir, int refinements,
               const std::string& observable, const std::vector<double>& frames) {
  json a;
  a["scenario"] = scenario;
  a["out"] = out_dir;
  if (refinements > 0) a["refinements"] = refinements;
  if (!observable.empty()) a["observable"] = observable;
  if (!frames.empty()) a["frames"] = frames;
  return a;
}

void write_manifest(const fs::path& out_dir, const std::string& subcommand, const json& args,
                    const std::map<std::string, double>& tolerances,
                    const std::map<std::string, double>& timings,
                    const std::vector<std::string>& outputs) {
  json m;
  m["subcommand"] = subcommand;
  m["args"] = args;
  m["tolerances"] = tolerances;
  m["timings_ms"] = timings;
  m["outputs"] = outputs;
  write_text(out_dir / "manifest.json", m.dump(2) + "\n");
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            const std::vector<double>& frame_times) {
  Scenario scenario = load_scenario(scenario_path);
  if (!frame_times.empty()) scenario.frame_times = frame_times;
  const auto bad = validate_scenario(scenario);
  if (!bad.empty()) {
    for (const auto& b : bad) std::cerr << "invalid: " << b << "\n";
    return kExitValidation;
  }
  fs::create_directories(out_dir);

  PipelineOptions opts;
  opts.compute_hamiltonian = false;
  auto result = run_pipeline(scenario, opts);

  std::vector<std::string> outputs;
  const fs::path out(out_dir);
  write_text(out / "charge.csv", charge_csv(result.traj));
  outputs.push_back("charge.csv");
  for (const auto& frame : result.frames) {
    char label[40];
    std::snprintf(label, sizeof(label), "frame_t%.6f", frame.t);
    write_text(out / (std::string(label) + ".csv"), frame_csv(frame, scenario.spatial_grid));
    write_frame_binary(out / label, frame, scenario.spatial_grid);
    outputs.push_back(std::string(label) + ".csv");
    outputs.push_back(std::string(label) + ".bin");
    outputs.push_back(std::string(label) + ".json");
  }
  write_text(out / "diagnostics.json", diagnostics_to_json(result.report).dump(2) + "\n");
  outputs.push_back("diagnostics.json");
  outputs.push_back("manifest.json");
  write_manifest(out, "run", args_json(scenario_path, out_dir, 0, "", frame_times),
                 scenario.tolerances, result.timings_ms, outputs);

  std::cout << "run complete: max norm drift " << result.report.max_norm_drift
            << ", max smoothed boundary residual " << result.report.max_smoothed_boundary
            << "\n";
  return kExitOk;
}

int cmd_identities(const std::string& out_dir) {
  const auto rows = run_identity_suite();
  bool all_pass = true;
  for (const auto& r : rows) {
    all_pass = all_pass && r.pass;
    std::printf("[%s] %-42s value=%.3e  tol=%.3e  %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.value, r.tolerance, r.note.c_str());
  }
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_text(fs::path(out_dir) / "identities.csv", identities_csv(rows));
    write_manifest(out_dir, "identities", args_json("", out_dir, 0, "", {}), {}, {},
                   {"identities.csv", "manifest.json"});
  }
  return all_pass ? kExitOk : kExitSuiteFail;
}

int cmd_converge(const std::string& scenario_path, const std::string& out_dir, int refinements,
                 const std::string& observable_name) {
  if (refinements < 2) {
    std::cerr << "usage error: --refinements must be >= 2\n";
    return kExitValidation;
  }
  Observable obs = Observable::charge;
  if (observable_name == "charge")
    obs = Observable::charge;
  else if (observable_name == "norm_drift")
    obs = Observable::norm_drift;
  else if (observable_name == "boundary")
    obs = Observable::boundary;
  else {
    std::cerr << "usage error: unknown observable '" << observable_name << "'\n";
    return kExitValidation;
  }
  const Scenario scenario = load_scenario(scenario_path);
  const auto table = convergence_study(scenario, refinements, obs);

  double floor = scenario.tol(obs == Observable::charge ? "order_floor_charge"
                                                        : "order_floor_drift");
  bool ok = true;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    std::printf("N=%-7d h=%.3e  error=%.6e", r.n_steps, r.h, r.error);
    if (i > 0) {
      std::printf("  order=%.2f", r.order);
      ok = ok && r.order >= floor;
    }
    std::printf("\n");
  }
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_text(fs::path(out_dir) / "convergence.csv", convergence_csv(table));
    write_manifest(out_dir, "converge",
                   args_json(scenario_path, out_dir, refinements, observable_name, {}),
                   scenario.tolerances, {}, {"convergence.csv", "manifest.json"});
  }
  if (!ok) std::cerr << "observed order fell below the floor " << floor << "\n";
  return ok ? kExitOk : kExitSuiteFail;
}

int cmd_validate(const std::string& scenario_path) {
  const Scenario scenario = load_scenario(scenario_path);
  const auto bad = validate_scenario(scenario);
  if (bad.empty()) {
    std::cout << "scenario valid\n";
    return kExitOk;
  }
  for (const auto& b : bad) std::cout << "violation: " << b << "\n";
  return kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1-D time-dependent delta-prime interaction simulator"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out";
  std::vector<double> frame_times;
  int refinements = 3;
  std::string observable = "charge";

  auto* run = app.add_subcommand("run", "solve a scenario and export artifacts");
  run->add_option("--scenario", scenario_path, "scenario JSON")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--frames", frame_times, "frame times t1,t2,...")->delimiter(',');

  auto* ident = app.add_subcommand("identities", "run the built-in identity suite");
  std::string ident_out;
  ident->add_option("--out", ident_out, "output directory (optional)");

  auto* conv = app.add_subcommand("converge", "grid refinement study");
  conv->add_option("--scenario", scenario_path, "scenario JSON")->required();
  conv->add_option("--out", out_dir, "output directory");
  conv->add_option("--refinements", refinements, "number of grids (>= 2)");
  conv->add_option("--observable", observable, "charge | norm_drift | boundary");

  auto* val = app.add_subcommand("validate", "validate a scenario file");
  val->add_option("--scenario", scenario_path, "scenario JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (run->parsed()) return cmd_run(scenario_path, out_dir, frame_times);
    if (ident->parsed()) return cmd_identities(ident_out);
    if (conv->parsed()) return cmd_converge(scenario_path, out_dir, refinements, observable);
    if (val->parsed()) return cmd_validate(scenario_path);
  } catch (const NumericalGuardError& e) {
    std::cerr << "numerical guard: " << e.what() << "\n";
    return kExitNumericalGuard;
  } catch (const ValidationError& e) {
    std::cerr << "validation: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumericalGuard;
  }
  return kExitValidation;
}
