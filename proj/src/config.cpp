#include "swe/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace swe {

using nlohmann::json;

int Config::steps() const {
  if (n_steps > 0) return n_steps;
  if (t_end > 0) return static_cast<int>(std::lround(t_end / dt));
  return 0;
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "no_boundary") return Scheme::no_boundary;
  if (name == "prognostic_z") return Scheme::prognostic_z;
  if (name == "naive") return Scheme::naive;
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

Integrator integrator_from_name(const std::string& name) {
  if (name == "poisson") return Integrator::poisson;
  if (name == "picard") return Integrator::picard;
  throw std::invalid_argument("unknown integrator '" + name + "'");
}

namespace {

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config key '") + key + "': " + e.what());
  }
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "scenario", "refinement", "degree", "scheme", "mesh", "nx", "ny", "lx", "ly",
      "periodic_x", "periodic_y", "dt", "t_end", "n_steps", "integrator",
      "picard_iters", "newton_abs_tol", "newton_rel_tol", "newton_max_iters",
      "supg", "tau", "g", "f_expression", "amplitude", "omega0", "u_x", "u_y",
      "d_expression", "csv_path", "vtk_every", "vtk_dir", "seed"};
  return keys;
}

}  // namespace

Config parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  for (const auto& item : j.items())
    if (!known_keys().count(item.key()))
      throw std::invalid_argument("unknown config key '" + item.key() + "'");

  Config c;
  read(j, "scenario", c.scenario);
  read(j, "refinement", c.refinement);
  read(j, "degree", c.degree);
  read(j, "scheme", c.scheme);
  read(j, "mesh", c.mesh);
  read(j, "nx", c.nx);
  read(j, "ny", c.ny);
  read(j, "lx", c.lx);
  read(j, "ly", c.ly);
  read(j, "periodic_x", c.periodic_x);
  read(j, "periodic_y", c.periodic_y);
  read(j, "dt", c.dt);
  read(j, "t_end", c.t_end);
  read(j, "n_steps", c.n_steps);
  read(j, "integrator", c.integrator);
  read(j, "picard_iters", c.picard_iters);
  read(j, "newton_abs_tol", c.newton_abs_tol);
  read(j, "newton_rel_tol", c.newton_rel_tol);
  read(j, "newton_max_iters", c.newton_max_iters);
  read(j, "supg", c.supg);
  read(j, "tau", c.tau);
  read(j, "g", c.g);
  read(j, "f_expression", c.f_expression);
  read(j, "amplitude", c.amplitude);
  read(j, "omega0", c.omega0);
  read(j, "u_x", c.u_x);
  read(j, "u_y", c.u_y);
  read(j, "d_expression", c.d_expression);
  read(j, "csv_path", c.csv_path);
  read(j, "vtk_every", c.vtk_every);
  read(j, "vtk_dir", c.vtk_dir);
  read(j, "seed", c.seed);

  if (!(c.dt > 0)) throw std::invalid_argument("dt must be positive");
  if (c.degree < 2 || c.degree > 3) throw std::invalid_argument("degree must be 2 or 3");
  if (!c.scheme.empty()) scheme_from_name(c.scheme);
  integrator_from_name(c.integrator);
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string save_config(const Config& c) {
  json j;
  j["scenario"] = c.scenario;
  j["refinement"] = c.refinement;
  j["degree"] = c.degree;
  j["scheme"] = c.scheme;
  j["mesh"] = c.mesh;
  j["nx"] = c.nx;
  j["ny"] = c.ny;
  j["lx"] = c.lx;
  j["ly"] = c.ly;
  j["periodic_x"] = c.periodic_x;
  j["periodic_y"] = c.periodic_y;
  j["dt"] = c.dt;
  j["t_end"] = c.t_end;
  j["n_steps"] = c.n_steps;
  j["integrator"] = c.integrator;
  j["picard_iters"] = c.picard_iters;
  j["newton_abs_tol"] = c.newton_abs_tol;
  j["newton_rel_tol"] = c.newton_rel_tol;
  j["newton_max_iters"] = c.newton_max_iters;
  j["supg"] = c.supg;
  j["tau"] = c.tau;
  j["g"] = c.g;
  j["f_expression"] = c.f_expression;
  j["amplitude"] = c.amplitude;
  j["omega0"] = c.omega0;
  j["u_x"] = c.u_x;
  j["u_y"] = c.u_y;
  j["d_expression"] = c.d_expression;
  j["csv_path"] = c.csv_path;
  j["vtk_every"] = c.vtk_every;
  j["vtk_dir"] = c.vtk_dir;
  j["seed"] = c.seed;
  return j.dump(2);
}

}  // namespace swe
