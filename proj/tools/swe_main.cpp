#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "swe/convergence.hpp"
#include "swe/output.hpp"
#include "swe/scenario.hpp"

namespace {

using namespace swe;

std::string vtk_name(const std::string& dir, int step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "state_%06d.vtk", step);
  return dir + "/" + buf;
}

int cmd_run(const std::string& config_path) {
  Config cfg = load_config(config_path);
  Problem p = setup(cfg);
  Stepper stepper(*p.model, to_step_config(cfg, p));

  Observer observer;
  if (cfg.vtk_every > 0) {
    observer = [&](const State& s, int step) {
      if (step % cfg.vtk_every == 0) write_vtk(*p.model, s, vtk_name(cfg.vtk_dir, step));
    };
  }

  const int n = cfg.steps();
  std::vector<RunRecord> series = run(*p.model, stepper, p.state, n, observer);
  if (!cfg.csv_path.empty()) write_csv(series, cfg.csv_path);

  const ConservedSet& c0 = series.front().conserved;
  const ConservedSet& c1 = series.back().conserved;
  double max_drift = 0;
  for (const RunRecord& r : series)
    max_drift = std::max(max_drift, std::abs(r.conserved.energy - c0.energy) /
                                        std::max(1.0, std::abs(c0.energy)));
  std::printf("steps            %d (t = %.6g)\n", n, series.back().time);
  std::printf("energy           %.17g -> %.17g\n", c0.energy, c1.energy);
  std::printf("enstrophy        %.17g -> %.17g\n", c0.enstrophy, c1.enstrophy);
  std::printf("total pv         %.17g -> %.17g\n", c0.total_pv, c1.total_pv);
  std::printf("mass             %.17g -> %.17g\n", c0.mass, c1.mass);
  std::printf("max energy drift %.3e (relative)\n", max_drift);
  if (!cfg.csv_path.empty()) std::printf("series           %s\n", cfg.csv_path.c_str());
  return 0;
}

int cmd_converge(const std::string& config_path, const std::vector<int>& levels) {
  Config cfg = load_config(config_path);
  std::vector<ConvergenceRow> rows = convergence_study(cfg, levels);
  std::printf("%8s %12s %14s %8s %14s %8s\n", "level", "h", "err_u", "rate_u", "err_D",
              "rate_D");
  for (const ConvergenceRow& r : rows)
    std::printf("%8d %12.5e %14.7e %8.3f %14.7e %8.3f\n", r.level, r.h, r.err_u, r.rate_u,
                r.err_d, r.rate_d);
  return 0;
}

int cmd_mesh_info(const std::string& config_path) {
  Config cfg = load_config(config_path);
  Problem p = setup(cfg);
  const Mesh& m = *p.mesh;
  double h = 0, area = 0;
  for (const auto& e : m.edges) h = std::max(h, e.length);
  for (int c = 0; c < m.n_cells(); ++c) area += m.cell_area(c);
  std::printf("vertices         %d\n", m.n_vertices);
  std::printf("edges            %d (%zu boundary)\n", m.n_edges(), m.boundary_edges.size());
  std::printf("cells            %d\n", m.n_cells());
  std::printf("euler char       %d\n", m.euler_characteristic());
  std::printf("longest edge     %.6g\n", h);
  std::printf("area             %.17g\n", area);
  std::printf("dim V0/V1/V2     %d / %d / %d\n", p.model->v0.dim, p.model->v1.dim,
              p.model->v2.dim);
  return 0;
}

int cmd_validate(const std::string& config_path) {
  Config cfg = load_config(config_path);
  Problem p = setup(cfg);
  bool ok = true;
  auto check = [&ok](const char* what, bool pass) {
    std::printf("%-28s %s\n", what, pass ? "PASS" : "FAIL");
    ok = ok && pass;
  };

  MeshReport report = validate(*p.mesh);
  check("mesh connectivity", report.pass);
  for (const std::string& f : report.failures) std::printf("  %s\n", f.c_str());

  bool depth_ok = true;
  try {
    p.model->check_depth(p.state.D);
  } catch (const std::exception&) {
    depth_ok = false;
  }
  check("initial depth positive", depth_ok);

  const double zres = p.model->consistency_residual(p.state.u, p.state.Z);
  check("initial vorticity relation", zres <= 1e-9 * (1 + p.state.Z.coeffs.cwiseAbs().maxCoeff()));

  const ConservedSet c = p.model->conserved(p.state);
  check("finite invariants", std::isfinite(c.energy) && std::isfinite(c.enstrophy) &&
                                 std::isfinite(c.total_pv) && std::isfinite(c.mass));
  check("positive energy and mass", c.energy > 0 && c.mass > 0);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compatible finite element rotating shallow water solver"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<int> levels;

  CLI::App* run_cmd = app.add_subcommand("run", "advance a scenario in time");
  run_cmd->add_option("config", config_path, "JSON config file")->required();

  CLI::App* conv_cmd = app.add_subcommand("converge", "steady-state convergence study");
  conv_cmd->add_option("config", config_path, "JSON config file")->required();
  conv_cmd->add_option("--levels", levels, "resolutions to test")
      ->required()
      ->delimiter(',');

  CLI::App* mesh_cmd = app.add_subcommand("mesh-info", "print mesh and space statistics");
  mesh_cmd->add_option("config", config_path, "JSON config file")->required();

  CLI::App* val_cmd = app.add_subcommand("validate", "dry-run setup and invariant checks");
  val_cmd->add_option("config", config_path, "JSON config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(config_path);
    if (conv_cmd->parsed()) return cmd_converge(config_path, levels);
    if (mesh_cmd->parsed()) return cmd_mesh_info(config_path);
    if (val_cmd->parsed()) return cmd_validate(config_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
