#include "swe/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <stdexcept>

namespace swe {

namespace {

int thread_cap() {
  const char* env = std::getenv("SWE_THREADS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return std::max(1, n);
}

double longest_edge(const Mesh& mesh) {
  double h = 0;
  for (const auto& e : mesh.edges) h = std::max(h, e.length);
  return h;
}

Config at_level(Config cfg, int level) {
  if (cfg.scenario == "kelvin_disk" || cfg.scenario == "disk_solid_rotation" ||
      (cfg.scenario == "custom_expression" && cfg.mesh == "disk")) {
    cfg.refinement = level;
  } else {
    cfg.nx = level;
    cfg.ny = level;
  }
  return cfg;
}

ConvergenceRow run_level(const Config& cfg, int level) {
  Problem p = setup(at_level(cfg, level));
  if (!p.steady) throw std::invalid_argument(
      "convergence study needs a scenario with a steady reference solution");

  State s = p.state;
  const int n = cfg.steps();
  if (n > 0) {
    Stepper stepper(*p.model, to_step_config(cfg, p));
    for (int i = 0; i < n; ++i) s = stepper.step(s).state;
  }

  const Discretization& d = p.model->disc;
  VectorQuad uh = at_quad_vector(d, s.u);
  ScalarQuad dh = at_quad(d, s.D);
  ScalarQuad eu{std::vector<double>(d.xq.size())};
  ScalarQuad ed{std::vector<double>(d.xq.size())};
  for (std::size_t i = 0; i < d.xq.size(); ++i) {
    const Vec2 du = uh.v[i] - p.u_ref(d.xq[i]);
    const double dd = dh.v[i] - p.d_ref(d.xq[i]);
    eu.v[i] = dot(du, du);
    ed.v[i] = dd * dd;
  }

  ConvergenceRow row;
  row.level = level;
  row.h = longest_edge(*p.mesh);
  row.err_u = std::sqrt(integrate(d, eu));
  row.err_d = std::sqrt(integrate(d, ed));
  return row;
}

}  // namespace

std::vector<ConvergenceRow> convergence_study(const Config& cfg,
                                              const std::vector<int>& levels) {
  if (levels.empty()) throw std::invalid_argument("convergence study needs levels");
  std::vector<ConvergenceRow> rows(levels.size());

  const int cap = thread_cap();
  std::vector<std::future<ConvergenceRow>> pending;
  std::size_t next = 0, done = 0;
  while (done < levels.size()) {
    while (next < levels.size() && pending.size() < static_cast<std::size_t>(cap)) {
      const int level = levels[next];
      pending.push_back(std::async(cap > 1 ? std::launch::async : std::launch::deferred,
                                   [&cfg, level] { return run_level(cfg, level); }));
      ++next;
    }
    rows[done] = pending[0].get();
    pending.erase(pending.begin());
    ++done;
  }

  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double hr = std::log2(rows[i - 1].h / rows[i].h);
    rows[i].rate_u = std::log2(rows[i - 1].err_u / rows[i].err_u) / hr;
    rows[i].rate_d = std::log2(rows[i - 1].err_d / rows[i].err_d) / hr;
  }
  return rows;
}

}  // namespace swe
