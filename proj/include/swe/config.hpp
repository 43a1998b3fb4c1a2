#pragma once

#include <string>

#include "swe/integrators.hpp"

namespace swe {

// Flat run configuration. Empty strings and negative sentinels mean
// "scenario default"; resolve helpers fill them in.
struct Config {
  std::string scenario = "kelvin_disk";
  int refinement = 2;
  int degree = 2;
  std::string scheme;  // no_boundary | prognostic_z | naive; default per scenario

  // mesh overrides, honored by the custom_expression scenario
  std::string mesh = "rectangle";  // rectangle | disk
  int nx = 0, ny = 0;              // 0: derived from refinement
  double lx = 1.0, ly = 1.0;
  bool periodic_x = false, periodic_y = false;

  double dt = 0.01;
  double t_end = -1.0;  // alternative to n_steps
  int n_steps = 0;
  std::string integrator = "poisson";
  int picard_iters = 4;
  double newton_abs_tol = 1e-12;
  double newton_rel_tol = 1e-12;
  int newton_max_iters = 30;
  bool supg = false;
  double tau = -1.0;  // negative: defaults to dt

  double g = 1.0;
  std::string f_expression;  // default per scenario

  double amplitude = 0.01;  // kelvin wave amplitude
  double omega0 = 0.3;      // solid-rotation rate

  // custom_expression initial data
  std::string u_x = "0", u_y = "0", d_expression = "1";

  std::string csv_path;
  int vtk_every = 0;
  std::string vtk_dir = ".";
  unsigned seed = 0;

  int steps() const;           // n_steps, or derived from t_end/dt
  double effective_tau() const { return tau < 0 ? dt : tau; }

  bool operator==(const Config&) const = default;
};

Config parse_config(const std::string& text);  // JSON object, unknown keys rejected
Config load_config(const std::string& path);
std::string save_config(const Config& cfg);

Scheme scheme_from_name(const std::string& name);
Integrator integrator_from_name(const std::string& name);

}  // namespace swe
