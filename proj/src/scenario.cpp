#include "swe/scenario.hpp"

#include <cmath>
#include <stdexcept>

namespace swe {

namespace {

int cells_per_side(const Config& cfg) {
  if (cfg.nx > 0) return cfg.nx;
  return 1 << cfg.refinement;
}

Scheme resolve_scheme(const Config& cfg, bool closed) {
  if (!cfg.scheme.empty()) return scheme_from_name(cfg.scheme);
  return closed ? Scheme::no_boundary : Scheme::prognostic_z;
}

std::string resolve_f(const Config& cfg, const char* fallback) {
  return cfg.f_expression.empty() ? fallback : cfg.f_expression;
}

Problem make_problem(std::unique_ptr<Mesh> mesh, const Config& cfg,
                     const std::string& f_expr) {
  Problem p;
  p.mesh = std::move(mesh);
  const bool closed = p.mesh->boundary_edges.empty();
  Expression f(f_expr);
  p.model = std::make_unique<ShallowWater>(*p.mesh, cfg.degree, resolve_scheme(cfg, closed),
                                           cfg.g, [f](Vec2 q) { return f(q); });
  return p;
}

// streamfunction of two opposite-signed gaussian vortices on the unit torus
double vortex_pair_vorticity(Vec2 p) {
  // moderate strength: the unit background depth must stay positive through
  // the initial adjustment even on coarse meshes
  const double amp = 15.0, sigma = 0.1;
  double z = 0;
  for (int ix = -1; ix <= 1; ++ix)
    for (int iy = -1; iy <= 1; ++iy) {
      const Vec2 q = {p.x + ix, p.y + iy};
      const Vec2 d1 = q - Vec2{0.3, 0.5};
      const Vec2 d2 = q - Vec2{0.7, 0.5};
      z += amp * (std::exp(-dot(d1, d1) / (sigma * sigma)) -
                  std::exp(-dot(d2, d2) / (sigma * sigma)));
    }
  return z;
}

// u = grad_perp(psi) with <grad gamma, grad psi> = <gamma, zeta>
Field velocity_from_vorticity(const ShallowWater& sw,
                              const std::function<double(Vec2)>& zeta) {
  const Discretization& d = sw.disc;
  ScalarQuad one = at_quad(d, [](Vec2) { return 1.0; });
  VectorQuad ex = {std::vector<Vec2>(one.v.size(), Vec2{1, 0})};
  VectorQuad ey = {std::vector<Vec2>(one.v.size(), Vec2{0, 1})};
  SpMat stiff = grad_dyad(d, sw.v0, sw.v0, ex, ex) + grad_dyad(d, sw.v0, sw.v0, ey, ey);

  Vector rhs = lin_mass(d, sw.v0, at_quad(d, zeta));
  // make the right-hand side compatible with the constant nullspace
  Vector mo = sw.m0 * Vector::Ones(sw.v0.dim);
  rhs -= (rhs.sum() / mo.sum()) * mo;

  // pin one coefficient; psi is only defined up to a constant
  std::vector<Eigen::Triplet<double>> t;
  for (int k = 0; k < stiff.outerSize(); ++k)
    for (SpMat::InnerIterator it(stiff, k); it; ++it)
      if (it.row() != 0 && it.col() != 0)
        t.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  t.emplace_back(0, 0, 1.0);
  SpMat pinned(sw.v0.dim, sw.v0.dim);
  pinned.setFromTriplets(t.begin(), t.end());
  rhs[0] = 0;
  Field psi(sw.v0, sparse_solve(pinned, rhs, false));

  VectorQuad gp = at_quad_gradient(d, psi);
  for (Vec2& v : gp.v) v = perp(v);
  return project(d, sw.v1, gp);
}

}  // namespace

Problem setup(const Config& cfg) {
  const std::string& name = cfg.scenario;

  if (name == "kelvin_disk") {
    Problem p = make_problem(std::make_unique<Mesh>(build_disk(cfg.refinement)), cfg,
                             resolve_f(cfg, "10"));
    const double a0 = cfg.amplitude;
    const double fval = Expression(resolve_f(cfg, "10"))(Vec2{1, 0});
    auto bump = [a0, fval](Vec2 q) { return a0 * std::exp((norm(q) - 1) * fval) * q.y; };
    p.state = p.model->make_state(
        [bump](Vec2 q) {
          const double r = norm(q);
          if (r < 1e-12) return Vec2{0, 0};
          return (bump(q) / r) * Vec2{-q.y, q.x};
        },
        [bump](Vec2 q) { return 1.0 + bump(q); });
    return p;
  }

  if (name == "disk_solid_rotation") {
    Problem p = make_problem(std::make_unique<Mesh>(build_disk(cfg.refinement)), cfg,
                             resolve_f(cfg, "10"));
    const double w0 = cfg.omega0;
    const double fval = Expression(resolve_f(cfg, "10"))(Vec2{1, 0});
    const double g = cfg.g;
    p.steady = true;
    p.u_ref = [w0](Vec2 q) { return Vec2{-w0 * q.y, w0 * q.x}; };
    p.d_ref = [w0, fval, g](Vec2 q) {
      return 2.0 + (w0 * w0 + w0 * fval) * dot(q, q) / (2 * g);
    };
    p.state = p.model->make_state(p.u_ref, p.d_ref);
    return p;
  }

  if (name == "channel_jet") {
    const int n = cells_per_side(cfg);
    Problem p = make_problem(
        std::make_unique<Mesh>(build_periodic_rectangle(n, n, 1.0, 1.0, true, false)), cfg,
        resolve_f(cfg, "1"));
    const double fval = Expression(resolve_f(cfg, "1"))(Vec2{0, 0});
    const double g = cfg.g;
    p.steady = true;
    p.u_ref = [](Vec2 q) { return Vec2{std::sin(M_PI * q.y), 0.0}; };
    p.d_ref = [fval, g](Vec2 q) {
      return 2.0 + fval * (std::cos(M_PI * q.y) - 1.0) / (g * M_PI);
    };
    p.state = p.model->make_state(p.u_ref, p.d_ref);
    return p;
  }

  if (name == "torus_vortex_pair") {
    const int n = cells_per_side(cfg);
    Problem p = make_problem(
        std::make_unique<Mesh>(build_periodic_rectangle(n, n, 1.0, 1.0, true, true)), cfg,
        resolve_f(cfg, "1"));
    p.state.u = velocity_from_vorticity(*p.model, vortex_pair_vorticity);
    p.state.D = project(p.model->disc, p.model->v2, [](Vec2) { return 1.0; });
    p.state.Z = p.model->init_z(p.state.u);
    p.state.t = 0;
    return p;
  }

  if (name == "custom_expression") {
    std::unique_ptr<Mesh> mesh;
    if (cfg.mesh == "disk") {
      mesh = std::make_unique<Mesh>(build_disk(cfg.refinement));
    } else if (cfg.mesh == "rectangle") {
      const int nx = cfg.nx > 0 ? cfg.nx : 1 << cfg.refinement;
      const int ny = cfg.ny > 0 ? cfg.ny : nx;
      mesh = std::make_unique<Mesh>(
          build_periodic_rectangle(nx, ny, cfg.lx, cfg.ly, cfg.periodic_x, cfg.periodic_y));
    } else {
      throw std::invalid_argument("custom_expression mesh must be 'rectangle' or 'disk'");
    }
    Problem p = make_problem(std::move(mesh), cfg, resolve_f(cfg, "1"));
    Expression ux(cfg.u_x), uy(cfg.u_y), dd(cfg.d_expression);
    p.state = p.model->make_state([ux, uy](Vec2 q) { return Vec2{ux(q), uy(q)}; },
                                  [dd](Vec2 q) { return dd(q); });
    return p;
  }

  throw std::invalid_argument("unknown scenario '" + name + "'");
}

StepConfig to_step_config(const Config& cfg, const Problem& p) {
  StepConfig s;
  s.dt = cfg.dt;
  s.integrator = integrator_from_name(cfg.integrator);
  s.newton.abs_tol = cfg.newton_abs_tol;
  s.newton.rel_tol = cfg.newton_rel_tol;
  s.newton.max_iters = cfg.newton_max_iters;
  s.picard_iters = cfg.picard_iters;
  s.supg = cfg.supg;
  s.tau = cfg.effective_tau();
  s.h_ref = p.model->mean_depth(p.state.D);
  return s;
}

}  // namespace swe
