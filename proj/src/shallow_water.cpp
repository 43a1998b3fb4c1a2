#include "swe/shallow_water.hpp"

#include <stdexcept>

namespace swe {

namespace {

int depth_space_degree(int k) { return k - 2; }

}  // namespace

ShallowWater::ShallowWater(const Mesh& m, int k, Scheme s, double gravity,
                           const std::function<double(Vec2)>& coriolis, int exactness)
    : mesh(&m), scheme(s), degree(k), g(gravity) {
  if (k < 2 || k > 3) throw std::invalid_argument("unsupported polynomial degree");
  if (s == Scheme::no_boundary && !m.boundary_edges.empty())
    throw std::invalid_argument("no_boundary scheme requires a closed mesh");

  disc = make_discretization(m, exactness < 0 ? 3 * k : exactness);

  const bool restrict_u = s != Scheme::no_boundary;
  v0 = build_space(m, Family::Lagrange, k, false);
  v0r = build_space(m, Family::Lagrange, k, true);
  v1 = build_space(m, Family::BDM, k - 1, restrict_u);
  v2 = build_space(m, Family::DiscontinuousLagrange, depth_space_degree(k), false);

  fq = at_quad(disc, coriolis);
  f_rhs = lin_mass(disc, v0, fq);
  f_rhs_ring = lin_mass(disc, v0r, fq);

  m0 = mass_matrix(disc, v0);
  m1 = mass_matrix(disc, v1);
  m2 = mass_matrix(disc, v2);
  curl = curl_form(disc, v0, v1);
  curl_ring = curl_form(disc, v0r, v1);
  btan = boundary_tangent(disc, v0, v1);
  fac0 = Factorized(m0);
  fac1 = Factorized(m1);
  fac2 = Factorized(m2);
  fac0r = Factorized(mass_matrix(disc, v0r));
}

void ShallowWater::check_depth(const Field& D) const {
  ScalarQuad dq = at_quad(disc, D);
  for (double v : dq.v)
    if (!(v > 0.0)) throw std::runtime_error("depth is not strictly positive");
}

Field ShallowWater::diagnose_flux(const Field& u, const Field& D) const {
  check_depth(D);
  VectorQuad uq = at_quad_vector(disc, u);
  ScalarQuad dq = at_quad(disc, D);
  for (std::size_t i = 0; i < uq.v.size(); ++i) uq.v[i] = dq.v[i] * uq.v[i];
  return Field(v1, fac1.solve(lin_mass(disc, v1, uq)));
}

Field ShallowWater::diagnose_q(const Field& Z, const Field& D) const {
  check_depth(D);
  SpMat wm = weighted_mass(disc, v0, at_quad(disc, D));
  return Field(v0, sparse_solve(wm, m0 * Z.coeffs, true));
}

Field ShallowWater::diagnose_q_from_velocity(const Field& u, const Field& D) const {
  check_depth(D);
  SpMat wm = weighted_mass(disc, v0, at_quad(disc, D));
  Vector rhs = f_rhs - curl * u.coeffs + btan * u.coeffs;
  return Field(v0, sparse_solve(wm, rhs, true));
}

Field ShallowWater::q_of(const State& s) const {
  if (scheme == Scheme::prognostic_z) return diagnose_q(s.Z, s.D);
  return diagnose_q_from_velocity(s.u, s.D);
}

Field ShallowWater::init_z(const Field& u) const {
  Vector rhs = f_rhs - curl * u.coeffs + btan * u.coeffs;
  return Field(v0, fac0.solve(rhs));
}

Field ShallowWater::diagnose_ring_vorticity(const Field& u) const {
  Vector rhs = f_rhs_ring - curl_ring * u.coeffs;
  return Field(v0r, fac0r.solve(rhs));
}

double ShallowWater::consistency_residual(const Field& u, const Field& Z) const {
  Vector r = m0 * Z.coeffs + curl * u.coeffs - btan * u.coeffs - f_rhs;
  return r.cwiseAbs().maxCoeff();
}

double ShallowWater::pv_residual(const Field& u, const Field& q, const Field& D) const {
  SpMat wm = weighted_mass(disc, v0, at_quad(disc, D));
  Vector r = wm * q.coeffs + curl * u.coeffs - btan * u.coeffs - f_rhs;
  return r.cwiseAbs().maxCoeff();
}

double ShallowWater::ring_pv_residual(const Field& u, const Field& q, const Field& D) const {
  SpMat wm = weighted_mass(disc, v0, at_quad(disc, D));
  Vector r = wm * q.coeffs + curl * u.coeffs - f_rhs;
  double out = 0;
  for (int i = 0; i < v0.dim; ++i)
    if (v0r.active_of_full[i] >= 0) out = std::max(out, std::abs(r[i]));
  return out;
}

ConservedSet ShallowWater::conserved(const State& s) const {
  Field q = q_of(s);
  VectorQuad uq = at_quad_vector(disc, s.u);
  ScalarQuad dq = at_quad(disc, s.D);
  ScalarQuad qq = at_quad(disc, q);

  ScalarQuad w = dq;
  ConservedSet out;
  for (std::size_t i = 0; i < dq.v.size(); ++i)
    w.v[i] = 0.5 * dq.v[i] * dot(uq.v[i], uq.v[i]) + 0.5 * g * dq.v[i] * dq.v[i];
  out.energy = integrate(disc, w);
  for (std::size_t i = 0; i < dq.v.size(); ++i) w.v[i] = qq.v[i] * dq.v[i];
  out.total_pv = integrate(disc, w);
  for (std::size_t i = 0; i < dq.v.size(); ++i) w.v[i] = qq.v[i] * qq.v[i] * dq.v[i];
  out.enstrophy = integrate(disc, w);
  out.mass = integrate(disc, dq);
  return out;
}

Tendencies ShallowWater::semidiscrete_tendencies(const State& s) const {
  check_depth(s.D);
  Field q = q_of(s);
  Field F = diagnose_flux(s.u, s.D);

  VectorQuad uq = at_quad_vector(disc, s.u);
  ScalarQuad dq = at_quad(disc, s.D);
  ScalarQuad qq = at_quad(disc, q);
  VectorQuad fluxq = at_quad_vector(disc, F);

  // <w, u_t> = -<w, q F_perp> + <div w, |u|^2/2 + g D>
  ScalarQuad bern = dq;
  for (std::size_t i = 0; i < dq.v.size(); ++i)
    bern.v[i] = 0.5 * dot(uq.v[i], uq.v[i]) + g * dq.v[i];
  VectorQuad qfp = fluxq;
  for (std::size_t i = 0; i < qfp.v.size(); ++i) qfp.v[i] = qq.v[i] * perp(fluxq.v[i]);

  Tendencies out;
  out.u_t = fac1.solve(lin_div(disc, v1, bern) - lin_mass(disc, v1, qfp));
  out.d_t = fac2.solve(-lin_mass(disc, v2, at_quad_divergence(disc, F)));

  if (scheme == Scheme::naive) {
    // q is slaved to u, so the weak (qD)_t is whatever the vorticity
    // relation implies for u_t (f is steady)
    out.z_t = fac0.solve(btan * out.u_t - curl * out.u_t);
  } else {
    VectorQuad qf = fluxq;
    for (std::size_t i = 0; i < qf.v.size(); ++i) qf.v[i] = qq.v[i] * fluxq.v[i];
    out.z_t = fac0.solve(lin_grad(disc, v0, qf));
  }
  return out;
}

double ShallowWater::energy_rate(const State& s, const Tendencies& t) const {
  VectorQuad uq = at_quad_vector(disc, s.u);
  ScalarQuad dq = at_quad(disc, s.D);
  VectorQuad utq = at_quad_vector(disc, Field(v1, t.u_t));
  ScalarQuad dtq = at_quad(disc, Field(v2, t.d_t));
  ScalarQuad w = dq;
  for (std::size_t i = 0; i < dq.v.size(); ++i)
    w.v[i] = dq.v[i] * dot(uq.v[i], utq.v[i]) +
             (0.5 * dot(uq.v[i], uq.v[i]) + g * dq.v[i]) * dtq.v[i];
  return integrate(disc, w);
}

double ShallowWater::enstrophy_rate(const State& s, const Tendencies& t) const {
  Field q = q_of(s);
  ScalarQuad qq = at_quad(disc, q);
  ScalarQuad dtq = at_quad(disc, Field(v2, t.d_t));
  ScalarQuad w = qq;
  for (std::size_t i = 0; i < qq.v.size(); ++i) w.v[i] = qq.v[i] * qq.v[i] * dtq.v[i];
  return 2.0 * q.coeffs.dot(m0 * t.z_t) - integrate(disc, w);
}

State ShallowWater::make_state(const std::function<Vec2(Vec2)>& u0,
                               const std::function<double(Vec2)>& d0) const {
  State s;
  s.u = project(disc, v1, u0);
  s.D = project(disc, v2, d0);
  check_depth(s.D);
  s.Z = init_z(s.u);
  s.t = 0;
  return s;
}

double ShallowWater::mean_depth(const Field& D) const {
  ScalarQuad dq = at_quad(disc, D);
  ScalarQuad one = dq;
  for (double& v : one.v) v = 1.0;
  return integrate(disc, dq) / integrate(disc, one);
}

}  // namespace swe
