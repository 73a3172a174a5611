// Command-line driver: run a case, run the Taylor-Green convergence study,
// or list what is registered.
//
// Exit codes: 0 success, 1 configuration or setup error, 2 divergence.

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <json.hpp>

#include "igalbm/config.hpp"
#include "igalbm/io.hpp"

namespace fs = std::filesystem;
using namespace igalbm;

namespace {

struct Common {
  std::string config;
  std::string output;
  long max_steps = -1;
  long seed = 0;  // reserved: the solver has no stochastic component
  std::string threads = "1";
};

void add_common(CLI::App* cmd, Common& c, bool needs_config) {
  auto* opt = cmd->add_option("--config", c.config, "configuration file (JSON)");
  if (needs_config) opt->required()->check(CLI::ExistingFile);
  cmd->add_option("--output", c.output, "output directory (default: config, then $IGALBM_OUTPUT_DIR, then ./output)");
  cmd->add_option("--max-steps", c.max_steps, "override solver.max_steps")->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", c.seed, "reserved; accepted for interface stability");
  cmd->add_option("--threads", c.threads, "1 or auto")->check(CLI::IsMember({"1", "auto"}));
}

RunConfig load(const Common& c) {
  RunConfig cfg = parse_config(c.config);
  for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << "\n";
  if (c.max_steps >= 0) cfg.solver.n_max = c.max_steps;
  cfg.solver.threads = c.threads == "auto" ? 0 : 1;
  return cfg;
}

fs::path output_dir(const Common& c, const RunConfig& cfg) {
  fs::path dir = "output";
  if (!c.output.empty()) {
    dir = c.output;
  } else if (!cfg.output.directory.empty()) {
    dir = cfg.output.directory;
  } else if (const char* env = std::getenv("IGALBM_OUTPUT_DIR")) {
    dir = env;
  }
  fs::create_directories(dir);
  return dir;
}

std::string step_name(long step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "field_%08ld.vtk", step);
  return buf;
}

int cmd_run(const Common& opts) {
  const RunConfig cfg = load(opts);
  const fs::path dir = output_dir(opts, cfg);
  Solver solver(build_case(cfg), cfg.solver);

  std::optional<DiagnosticsWriter> diag;
  if (cfg.output.diagnostics) diag.emplace((dir / "diagnostics.csv").string());
  RunSinks sinks;
  sinks.warning = [](const std::string& w) { std::cerr << "warning: " << w << "\n"; };
  if (diag) sinks.diagnostics = [&](const Diagnostics& d) { diag->write(d); };
  if (cfg.output.vtk && cfg.output.vtk_series) {
    sinks.snapshot = [&](const State& s, const Fields& f) {
      write_vtk({f, s.time, s.step}, solver.disc().colloc, (dir / step_name(s.step)).string());
    };
  }

  std::cout << cfg.case_name << ": " << solver.disc().size() << " collocation points, dt = " << solver.dt()
            << ", tau = " << solver.tau() << ", max steps = " << solver.n_max() << "\n";
  const RunResult res = solver.run(sinks);
  if (cfg.output.vtk) write_vtk({res.fields, res.state.time, res.state.step}, solver.disc().colloc, (dir / "field_final.vtk").string());

  nlohmann::ordered_json summary;
  summary["case"] = cfg.case_name;
  summary["points"] = solver.disc().size();
  summary["dt"] = res.dt;
  summary["tau"] = res.tau;
  summary["steps"] = res.state.step;
  summary["time"] = res.state.time;
  summary["converged"] = res.converged;
  summary["final"] = {{"total_mass", res.history.back().total_mass},
                      {"kinetic_energy", res.history.back().kinetic_energy},
                      {"max_velocity", res.history.back().max_velocity}};

  if (cfg.case_name == "lid_cavity") {
    if (cfg.output.centerlines) {
      write_centerline_csv(centerline_extract(solver.disc(), res.fields, CenterlineAxis::Vertical, 129),
                           (dir / "centerline_u.csv").string());
      write_centerline_csv(centerline_extract(solver.disc(), res.fields, CenterlineAxis::Horizontal, 129),
                           (dir / "centerline_v.csv").string());
    }
    const auto ref = load_ghia_re100();
    std::vector<double> yu, xv;
    for (const auto& s : ref.u_vertical) yu.push_back(s.coordinate * cfg.cavity.length);
    for (const auto& s : ref.v_horizontal) xv.push_back(s.coordinate * cfg.cavity.length);
    auto su = centerline_extract(solver.disc(), res.fields, CenterlineAxis::Vertical, yu);
    auto sv = centerline_extract(solver.disc(), res.fields, CenterlineAxis::Horizontal, xv);
    for (auto& s : su) s.coordinate /= cfg.cavity.length;
    for (auto& s : sv) s.coordinate /= cfg.cavity.length;
    const auto eu = compare_ghia(su, ref.u_vertical, cfg.cavity.u_lid);
    const auto ev = compare_ghia(sv, ref.v_horizontal, cfg.cavity.u_lid);
    summary["ghia"] = {{"u_rms", eu.rms}, {"u_max", eu.max}, {"v_rms", ev.rms}, {"v_max", ev.max}};
    std::cout << "Ghia Re=100: u rms " << eu.rms << " max " << eu.max << ", v rms " << ev.rms << " max " << ev.max
              << " (fractions of U_lid)\n";
  } else if (cfg.case_name == "taylor_green" || cfg.case_name == "taylor_green_curved") {
    const double err = tgv_error(res.fields, solver.disc().colloc, res.state.time, cfg.tgv);
    summary["l2_error"] = err;
    std::vector<double> t, e;
    for (const auto& d : res.history) {
      t.push_back(d.time);
      e.push_back(d.kinetic_energy);
    }
    if (t.size() >= 2) {
      const double rate = fit_decay_rate(t, e);
      const double exact = 2.0 * cfg.tgv.kappa2() * cfg.tgv.nu;
      summary["decay_rate"] = rate;
      summary["decay_rate_exact"] = exact;
      std::cout << "kinetic-energy decay rate " << rate << " (analytic " << exact << ")\n";
    }
    std::cout << "relative L2 velocity error at t = " << res.state.time << ": " << err << "\n";
  }
  std::ofstream(dir / "summary.json") << summary.dump(2) << "\n";
  std::cout << "steps " << res.state.step << (res.converged ? " (converged)" : "") << ", output in " << dir.string()
            << "\n";
  return 0;
}

int cmd_study(const Common& opts) {
  const RunConfig cfg = load(opts);
  if (cfg.case_name != "taylor_green") throw ConfigError("convergence-study runs the taylor_green case only");
  const fs::path dir = output_dir(opts, cfg);
  ConvergenceOptions co;
  co.tgv = cfg.tgv;
  co.resolutions = cfg.study.resolutions;
  co.degree = cfg.degree;
  co.final_time = cfg.study.final_time;
  co.solver = cfg.solver;
  co.exact_injection = cfg.study.exact_injection;
  const auto rows = convergence_study(co);
  write_convergence_csv(rows, (dir / "convergence.csv").string());
  std::cout << "resolution  error                  order     mass drift\n";
  bool failed = false;
  for (const auto& r : rows) {
    std::printf("%10d  %.6e  %8s  %.3e %s\n", r.resolution, r.error,
                std::isnan(r.order) ? "-" : std::to_string(r.order).substr(0, 6).c_str(), r.mass_drift,
                r.ok ? "" : ("FAILED: " + r.message).c_str());
    failed = failed || !r.ok;
  }
  std::cout << "written " << (dir / "convergence.csv").string() << "\n";
  return failed ? 2 : 0;
}

int cmd_list() {
  std::cout << "cases:\n";
  for (const auto& c : registered_cases()) std::cout << "  " << c << "\n";
  std::cout << "geometries:\n";
  for (const auto& g : registered_geometries()) std::cout << "  " << g << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isogeometric lattice Boltzmann solver (D2Q9 BGK, NURBS collocation, RK4)"};
  app.require_subcommand(1);
  Common run_opts, study_opts;
  auto* run = app.add_subcommand("run", "run one case");
  add_common(run, run_opts, true);
  auto* study = app.add_subcommand("convergence-study", "Taylor-Green error over several resolutions");
  add_common(study, study_opts, true);
  app.add_subcommand("list-cases", "print registered cases and geometry builders");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return cmd_run(run_opts);
    if (study->parsed()) return cmd_study(study_opts);
    return cmd_list();
  } catch (const SolverDivergence& e) {
    const auto& d = e.last_good();
    std::cerr << "error: " << e.what() << "\n  last good: step " << d.step << ", t = " << d.time
              << ", mass = " << d.total_mass << ", max|u| = " << d.max_velocity << "\n";
    return 2;
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
