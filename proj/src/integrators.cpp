#include "swe/integrators.hpp"

#include <stdexcept>
#include <string>

namespace swe {

namespace {

void add_block(std::vector<Eigen::Triplet<double>>& out, const SpMat& a, int r0, int c0,
               double scale = 1.0) {
  for (int k = 0; k < a.outerSize(); ++k)
    for (SpMat::InnerIterator it(a, k); it; ++it)
      out.emplace_back(r0 + static_cast<int>(it.row()), c0 + static_cast<int>(it.col()),
                       scale * it.value());
}

}  // namespace

VectorQuad average_flux(const Discretization& d, const Field& u0, const Field& u1,
                        const Field& d0, const Field& d1) {
  VectorQuad a = at_quad_vector(d, u0);
  VectorQuad b = at_quad_vector(d, u1);
  ScalarQuad p = at_quad(d, d0);
  ScalarQuad q = at_quad(d, d1);
  VectorQuad out = a;
  for (std::size_t i = 0; i < a.v.size(); ++i)
    out.v[i] = (q.v[i] / 3 + p.v[i] / 6) * b.v[i] + (q.v[i] / 6 + p.v[i] / 3) * a.v[i];
  return out;
}

ScalarQuad average_kinetic(const Discretization& d, const Field& u0, const Field& u1,
                           const Field& d0, const Field& d1, double g) {
  VectorQuad a = at_quad_vector(d, u0);
  VectorQuad b = at_quad_vector(d, u1);
  ScalarQuad p = at_quad(d, d0);
  ScalarQuad q = at_quad(d, d1);
  ScalarQuad out = p;
  for (std::size_t i = 0; i < p.v.size(); ++i)
    out.v[i] = (dot(a.v[i], a.v[i]) + dot(a.v[i], b.v[i]) + dot(b.v[i], b.v[i])) / 6 +
               0.5 * g * (p.v[i] + q.v[i]);
  return out;
}

ScalarQuad supg_q_star(const Discretization& d, const Field& q0, const Field& q1,
                       const Field& d0, const Field& d1, const Field& flux,
                       double dt, double tau) {
  ScalarQuad a = at_quad(d, q0);
  ScalarQuad b = at_quad(d, q1);
  if (tau == 0.0) {
    for (std::size_t i = 0; i < a.v.size(); ++i) a.v[i] = 0.5 * (a.v[i] + b.v[i]);
    return a;
  }
  ScalarQuad p = at_quad(d, d0);
  ScalarQuad q = at_quad(d, d1);
  VectorQuad ga = at_quad_gradient(d, q0);
  VectorQuad gb = at_quad_gradient(d, q1);
  VectorQuad fq = at_quad_vector(d, flux);
  for (std::size_t i = 0; i < a.v.size(); ++i) {
    const double dbar = 0.5 * (p.v[i] + q.v[i]);
    if (!(dbar > 0.0)) throw std::runtime_error("depth is not strictly positive");
    const Vec2 gbar = 0.5 * (ga.v[i] + gb.v[i]);
    a.v[i] = 0.5 * (a.v[i] + b.v[i]) -
             tau * ((b.v[i] - a.v[i]) / dt + dot(fq.v[i], gbar) / dbar);
  }
  return a;
}

Stepper::Stepper(const ShallowWater& sw, StepConfig cfg) : sw_(&sw), cfg_(cfg) {
  if (!(cfg_.dt > 0)) throw std::invalid_argument("dt must be positive");
  if (cfg_.tau < 0) throw std::invalid_argument("tau must be nonnegative");
  if (cfg_.integrator == Integrator::picard) {
    if (!(cfg_.h_ref > 0)) throw std::invalid_argument("h_ref must be positive");
    const Discretization& d = sw_->disc;
    const int n1 = sw_->v1.dim, n2 = sw_->v2.dim;
    const double dt = cfg_.dt;
    std::vector<Eigen::Triplet<double>> t;
    add_block(t, sw_->m1, 0, 0);
    add_block(t, perp_proj(d, sw_->v1, sw_->v1, sw_->fq), 0, 0, 0.5 * dt);
    add_block(t, div_form(d, sw_->v1, sw_->v2), 0, n1, -0.5 * dt * sw_->g);
    add_block(t, div_form_t(d, sw_->v2, sw_->v1), n1, 0, 0.5 * dt * cfg_.h_ref);
    add_block(t, sw_->m2, n1, n1);
    SpMat a(n1 + n2, n1 + n2);
    a.setFromTriplets(t.begin(), t.end());
    wave_op_ = std::make_shared<Factorized>(a);
  }
}

int Stepper::system_size() const {
  return 2 * sw_->v1.dim + sw_->v2.dim + sw_->v0.dim;
}

Vector Stepper::pack(const Field& u1, const Field& d1, const Field& flux,
                     const Field& q1) const {
  const int n1 = sw_->v1.dim, n2 = sw_->v2.dim, n0 = sw_->v0.dim;
  Vector x(2 * n1 + n2 + n0);
  x.segment(0, n1) = u1.coeffs;
  x.segment(n1, n2) = d1.coeffs;
  x.segment(n1 + n2, n1) = flux.coeffs;
  x.segment(2 * n1 + n2, n0) = q1.coeffs;
  return x;
}

Stepper::Unknowns Stepper::unpack(const Vector& x) const {
  const int n1 = sw_->v1.dim, n2 = sw_->v2.dim, n0 = sw_->v0.dim;
  Unknowns k;
  k.u = Field(sw_->v1, x.segment(0, n1));
  k.D = Field(sw_->v2, x.segment(n1, n2));
  k.F = Field(sw_->v1, x.segment(n1 + n2, n1));
  k.q = Field(sw_->v0, x.segment(2 * n1 + n2, n0));
  return k;
}

ScalarQuad Stepper::q_star(const Field& q0, const Field& q1, const Field& d0,
                           const Field& d1, const Field& flux) const {
  return supg_q_star(sw_->disc, q0, q1, d0, d1, flux, cfg_.dt,
                     use_supg() ? cfg_.tau : 0.0);
}

Vector Stepper::residual(const State& s0, const Field& q0, const Vector& x) const {
  const ShallowWater& sw = *sw_;
  const Discretization& d = sw.disc;
  const double dt = cfg_.dt;
  Unknowns k = unpack(x);
  sw.check_depth(k.D);

  ScalarQuad qs = q_star(q0, k.q, s0.D, k.D, k.F);
  VectorQuad fq = at_quad_vector(d, k.F);

  VectorQuad qfp = fq;
  for (std::size_t i = 0; i < fq.v.size(); ++i) qfp.v[i] = qs.v[i] * perp(fq.v[i]);
  Vector r_u = sw.m1 * (k.u.coeffs - s0.u.coeffs) +
               dt * (lin_mass(d, sw.v1, qfp) -
                     lin_div(d, sw.v1, average_kinetic(d, s0.u, k.u, s0.D, k.D, sw.g)));

  Vector r_d = sw.m2 * (k.D.coeffs - s0.D.coeffs) +
               dt * lin_mass(d, sw.v2, at_quad_divergence(d, k.F));

  Vector r_f = sw.m1 * k.F.coeffs -
               lin_mass(d, sw.v1, average_flux(d, s0.u, k.u, s0.D, k.D));

  Vector r_q;
  SpMat wm = weighted_mass(d, sw.v0, at_quad(d, k.D));
  if (sw.scheme == Scheme::naive) {
    r_q = wm * k.q.coeffs + sw.curl * k.u.coeffs - sw.btan * k.u.coeffs - sw.f_rhs;
  } else {
    ScalarQuad q0d0 = at_quad(d, q0);
    ScalarQuad d0q = at_quad(d, s0.D);
    for (std::size_t i = 0; i < q0d0.v.size(); ++i) q0d0.v[i] *= d0q.v[i];
    VectorQuad fqs = fq;
    for (std::size_t i = 0; i < fq.v.size(); ++i) fqs.v[i] = qs.v[i] * fq.v[i];
    r_q = wm * k.q.coeffs - lin_mass(d, sw.v0, q0d0) - dt * lin_grad(d, sw.v0, fqs);
  }

  const int n1 = sw.v1.dim, n2 = sw.v2.dim, n0 = sw.v0.dim;
  Vector r(2 * n1 + n2 + n0);
  r.segment(0, n1) = r_u;
  r.segment(n1, n2) = r_d;
  r.segment(n1 + n2, n1) = r_f;
  r.segment(2 * n1 + n2, n0) = r_q;
  return r;
}

SpMat Stepper::jacobian(const State& s0, const Field& q0, const Vector& x) const {
  const ShallowWater& sw = *sw_;
  const Discretization& d = sw.disc;
  const double dt = cfg_.dt;
  const double tau = use_supg() ? cfg_.tau : 0.0;
  Unknowns k = unpack(x);

  const int n1 = sw.v1.dim, n2 = sw.v2.dim;
  const int off_u = 0, off_d = n1, off_f = n1 + n2, off_q = 2 * n1 + n2;

  VectorQuad u0q = at_quad_vector(d, s0.u);
  VectorQuad u1q = at_quad_vector(d, k.u);
  ScalarQuad d0q = at_quad(d, s0.D);
  ScalarQuad d1q = at_quad(d, k.D);
  VectorQuad fq = at_quad_vector(d, k.F);
  ScalarQuad q1q = at_quad(d, k.q);
  ScalarQuad qs = q_star(q0, k.q, s0.D, k.D, k.F);

  std::vector<Eigen::Triplet<double>> t;

  // momentum row
  VectorQuad kin = u0q;
  for (std::size_t i = 0; i < kin.v.size(); ++i)
    kin.v[i] = (u0q.v[i] + 2.0 * u1q.v[i]) / 6.0;
  add_block(t, sw.m1, off_u, off_u);
  add_block(t, div_dot_vec(d, sw.v1, sw.v1, kin), off_u, off_u, -dt);
  add_block(t, div_form(d, sw.v1, sw.v2), off_u, off_d, -0.5 * dt * sw.g);
  add_block(t, perp_proj(d, sw.v1, sw.v1, qs), off_u, off_f, dt);
  add_block(t, perp_coeff(d, sw.v1, sw.v0, fq), off_u, off_q, dt * (0.5 - tau / dt));

  // depth row
  add_block(t, sw.m2, off_d, off_d);
  add_block(t, div_form_t(d, sw.v2, sw.v1), off_d, off_f, dt);

  // flux projection row
  ScalarQuad wd = d0q;
  for (std::size_t i = 0; i < wd.v.size(); ++i) wd.v[i] = d1q.v[i] / 3 + d0q.v[i] / 6;
  VectorQuad wu = u0q;
  for (std::size_t i = 0; i < wu.v.size(); ++i) wu.v[i] = u1q.v[i] / 3 + u0q.v[i] / 6;
  add_block(t, vec_mass_weighted(d, sw.v1, sw.v1, wd), off_f, off_u, -1.0);
  add_block(t, vec_scalar(d, sw.v1, sw.v2, wu), off_f, off_d, -1.0);
  add_block(t, sw.m1, off_f, off_f);

  // vorticity row
  SpMat wm = weighted_mass(d, sw.v0, d1q);
  add_block(t, wm, off_q, off_q);
  add_block(t, scalar_pair(d, sw.v0, sw.v2, q1q), off_q, off_d);
  if (sw.scheme == Scheme::naive) {
    add_block(t, sw.curl, off_q, off_u);
    add_block(t, sw.btan, off_q, off_u, -1.0);
  } else {
    add_block(t, grad_dot_coeff(d, sw.v0, sw.v0, fq), off_q, off_q,
              -dt * (0.5 - tau / dt));
    add_block(t, grad_scalar(d, sw.v0, sw.v1, qs), off_q, off_f, -dt);
  }

  if (use_supg()) {
    // derivatives of the upwind shift in q*
    VectorQuad gbar = at_quad_gradient(d, q0);
    VectorQuad g1 = at_quad_gradient(d, k.q);
    for (std::size_t i = 0; i < gbar.v.size(); ++i)
      gbar.v[i] = 0.5 * (gbar.v[i] + g1.v[i]);

    VectorQuad fperp = fq;
    VectorQuad f_over_2dbar = fq;      // tau F / (2 Dbar)
    VectorQuad g_over_dbar = gbar;     // tau grad(qbar) / Dbar
    ScalarQuad shift_d = d1q;          // tau (F . grad qbar) / (2 Dbar^2)
    for (std::size_t i = 0; i < fq.v.size(); ++i) {
      const double dbar = 0.5 * (d0q.v[i] + d1q.v[i]);
      fperp.v[i] = perp(fq.v[i]);
      f_over_2dbar.v[i] = (tau / (2 * dbar)) * fq.v[i];
      g_over_dbar.v[i] = (tau / dbar) * gbar.v[i];
      shift_d.v[i] = (tau / (2 * dbar * dbar)) * dot(fq.v[i], gbar.v[i]);
    }
    VectorQuad fp_shift = fperp;  // F_perp times dq*/dD1 coefficient
    VectorQuad f_shift = fq;      // F times dq*/dD1 coefficient
    for (std::size_t i = 0; i < fq.v.size(); ++i) {
      fp_shift.v[i] = shift_d.v[i] * fperp.v[i];
      f_shift.v[i] = shift_d.v[i] * fq.v[i];
    }

    add_block(t, vec_dot_gradscalar(d, sw.v1, sw.v0, fperp, f_over_2dbar), off_u, off_q, -dt);
    add_block(t, vec_dyad(d, sw.v1, sw.v1, fperp, g_over_dbar), off_u, off_f, -dt);
    add_block(t, vec_scalar(d, sw.v1, sw.v2, fp_shift), off_u, off_d, dt);
    if (sw.scheme != Scheme::naive) {
      add_block(t, grad_dyad(d, sw.v0, sw.v0, fq, f_over_2dbar), off_q, off_q, dt);
      add_block(t, SpMat(vec_dot_gradscalar(d, sw.v1, sw.v0, g_over_dbar, fq).transpose()),
                off_q, off_f, dt);
      add_block(t, grad_vec_scalar(d, sw.v0, sw.v2, f_shift), off_q, off_d, -dt);
    }
  }

  const int n = system_size();
  SpMat j(n, n);
  j.setFromTriplets(t.begin(), t.end());
  return j;
}

Eigen::MatrixXd Stepper::fd_jacobian(const State& s0, const Field& q0,
                                     const Vector& x) const {
  const int n = system_size();
  Vector base = residual(s0, q0, x);
  Eigen::MatrixXd j(n, n);
  for (int c = 0; c < n; ++c) {
    const double eps = 1e-7 * std::max(1.0, std::abs(x[c]));
    Vector xp = x;
    xp[c] += eps;
    j.col(c) = (residual(s0, q0, xp) - base) / eps;
  }
  return j;
}

State Stepper::finish(const State& s0, const Field& u1, const Field& d1,
                      const Field& q1) const {
  const ShallowWater& sw = *sw_;
  ScalarQuad qd = at_quad(sw.disc, q1);
  ScalarQuad dq = at_quad(sw.disc, d1);
  for (std::size_t i = 0; i < qd.v.size(); ++i) qd.v[i] *= dq.v[i];
  State out;
  out.u = u1;
  out.D = d1;
  out.Z = Field(sw.v0, sw.fac0.solve(lin_mass(sw.disc, sw.v0, qd)));
  out.t = s0.t + cfg_.dt;
  return out;
}

StepResult Stepper::step(const State& s) const {
  return cfg_.integrator == Integrator::poisson ? poisson_step(s) : picard_step(s);
}

StepResult Stepper::poisson_step(const State& s) const {
  const ShallowWater& sw = *sw_;
  Field q0 = sw.q_of(s);
  Field f0 = sw.diagnose_flux(s.u, s.D);
  Vector x = pack(s.u, s.D, f0, q0);

  Vector r = residual(s, q0, x);
  const double tol = cfg_.newton.abs_tol + cfg_.newton.rel_tol * r.norm();
  std::vector<double> history = {r.norm()};
  int it = 0;
  while (r.norm() > tol) {
    if (it >= cfg_.newton.max_iters) {
      std::string msg = "newton did not converge; residuals:";
      for (double h : history) msg += " " + std::to_string(h);
      throw std::runtime_error(msg);
    }
    SpMat j = jacobian(s, q0, x);
    Eigen::SparseLU<SpMat> lu;
    lu.compute(j);
    if (lu.info() != Eigen::Success) throw std::runtime_error("newton jacobian is singular");
    x -= lu.solve(r);
    r = residual(s, q0, x);
    history.push_back(r.norm());
    ++it;
  }

  Unknowns k = unpack(x);
  StepResult out;
  out.state = finish(s, k.u, k.D, k.q);
  out.iterations = it;
  out.residual = r.norm();
  out.residual_history = std::move(history);
  return out;
}

Field Stepper::solve_q_linear(const State& s0, const Field& q0, const Field& u1,
                              const Field& d1, const Field& flux) const {
  const ShallowWater& sw = *sw_;
  const Discretization& d = sw.disc;
  SpMat wm = weighted_mass(d, sw.v0, at_quad(d, d1));

  if (sw.scheme == Scheme::naive) {
    Vector rhs = sw.f_rhs - sw.curl * u1.coeffs + sw.btan * u1.coeffs;
    return Field(sw.v0, sparse_solve(wm, rhs, true));
  }

  const double dt = cfg_.dt;
  VectorQuad fq = at_quad_vector(d, flux);
  ScalarQuad q0q = at_quad(d, q0);
  ScalarQuad d0q = at_quad(d, s0.D);

  SpMat a = wm;
  ScalarQuad known = q0q;  // the part of q* not involving q1
  if (use_supg()) {
    const double tau = cfg_.tau;
    ScalarQuad d1q = at_quad(d, d1);
    VectorQuad g0 = at_quad_gradient(d, q0);
    VectorQuad f_over_2dbar = fq;
    for (std::size_t i = 0; i < fq.v.size(); ++i) {
      const double dbar = 0.5 * (d0q.v[i] + d1q.v[i]);
      if (!(dbar > 0.0)) throw std::runtime_error("depth is not strictly positive");
      f_over_2dbar.v[i] = (tau / (2 * dbar)) * fq.v[i];
      known.v[i] = (0.5 + tau / dt) * q0q.v[i] - dot(f_over_2dbar.v[i], g0.v[i]);
    }
    a = a - dt * (0.5 - tau / dt) * grad_dot_coeff(d, sw.v0, sw.v0, fq) +
        dt * grad_dyad(d, sw.v0, sw.v0, fq, f_over_2dbar);
  } else {
    for (double& v : known.v) v *= 0.5;
    a = a - 0.5 * dt * grad_dot_coeff(d, sw.v0, sw.v0, fq);
  }

  ScalarQuad q0d0 = q0q;
  for (std::size_t i = 0; i < q0d0.v.size(); ++i) q0d0.v[i] = q0q.v[i] * d0q.v[i];
  VectorQuad fknown = fq;
  for (std::size_t i = 0; i < fq.v.size(); ++i) fknown.v[i] = known.v[i] * fq.v[i];
  Vector rhs = lin_mass(d, sw.v0, q0d0) + dt * lin_grad(d, sw.v0, fknown);
  return Field(sw.v0, sparse_solve(a, rhs, false));
}

StepResult Stepper::picard_step(const State& s) const {
  const ShallowWater& sw = *sw_;
  const Discretization& d = sw.disc;
  const int n1 = sw.v1.dim, n2 = sw.v2.dim;
  Field q0 = sw.q_of(s);

  Field u1 = s.u;
  Field d1 = s.D;
  Field flux, q1;
  for (int it = 0; it < cfg_.picard_iters; ++it) {
    flux = Field(sw.v1, sw.fac1.solve(lin_mass(d, sw.v1, average_flux(d, s.u, u1, s.D, d1))));
    q1 = solve_q_linear(s, q0, u1, d1, flux);
    Vector r = residual(s, q0, pack(u1, d1, flux, q1));
    Vector r_ud(n1 + n2);
    r_ud.segment(0, n1) = r.segment(0, n1);
    r_ud.segment(n1, n2) = r.segment(n1, n2);
    Vector delta = wave_op_->solve(-r_ud);
    u1.coeffs += delta.segment(0, n1);
    d1.coeffs += delta.segment(n1, n2);
  }

  // refresh the diagnostics one last time so the carried q matches (u1, D1)
  flux = Field(sw.v1, sw.fac1.solve(lin_mass(d, sw.v1, average_flux(d, s.u, u1, s.D, d1))));
  q1 = solve_q_linear(s, q0, u1, d1, flux);
  Vector r = residual(s, q0, pack(u1, d1, flux, q1));

  StepResult out;
  out.state = finish(s, u1, d1, q1);
  out.iterations = cfg_.picard_iters;
  out.residual = r.segment(0, n1 + n2).norm();
  return out;
}

std::vector<RunRecord> run(const ShallowWater& sw, const Stepper& stepper, State state,
                           int n_steps, const Observer& observer) {
  std::vector<RunRecord> records;
  records.push_back({0, state.t, sw.conserved(state), 0, 0.0});
  if (observer) observer(state, 0);
  for (int i = 1; i <= n_steps; ++i) {
    StepResult res;
    try {
      res = stepper.step(state);
    } catch (const std::exception& e) {
      throw std::runtime_error("step " + std::to_string(i) + " failed: " + e.what());
    }
    state = std::move(res.state);
    records.push_back({i, state.t, sw.conserved(state), res.iterations, res.residual});
    if (observer) observer(state, i);
  }
  return records;
}

}  // namespace swe
