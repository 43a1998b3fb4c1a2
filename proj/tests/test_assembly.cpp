#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "swe/assembly.hpp"

using namespace swe;

namespace {

Eigen::VectorXd random_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = uni(rng);
  return v;
}

double l2_error(const Discretization& d, const Field& fh,
                const std::function<double(Vec2)>& f) {
  ScalarQuad a = at_quad(d, fh);
  ScalarQuad b = at_quad(d, f);
  for (std::size_t i = 0; i < a.v.size(); ++i) {
    const double e = a.v[i] - b.v[i];
    a.v[i] = e * e;
  }
  return std::sqrt(integrate(d, a));
}

}  // namespace

TEST_CASE("DG0 mass matrix is the diagonal of cell areas") {
  Mesh m = build_disk(1);
  Discretization d = make_discretization(m, 6);
  FunctionSpace v2 = build_space(m, Family::DiscontinuousLagrange, 0, false);
  SpMat mass = mass_matrix(d, v2);
  CHECK(mass.nonZeros() == m.n_cells());
  for (int c = 0; c < m.n_cells(); ++c)
    CHECK(mass.coeff(c, c) == doctest::Approx(m.cell_area(c)).epsilon(1e-13));
}

TEST_CASE("weighted mass with unit coefficient equals the mass matrix") {
  Mesh m = build_periodic_rectangle(3, 2, 1.0, 1.0, true, false);
  Discretization d = make_discretization(m, 6);
  FunctionSpace v0 = build_space(m, Family::Lagrange, 2, false);
  ScalarQuad one = at_quad(d, [](Vec2) { return 1.0; });
  SpMat a = mass_matrix(d, v0);
  SpMat b = weighted_mass(d, v0, one);
  CHECK((Eigen::MatrixXd(a) - Eigen::MatrixXd(b)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("boundary pairing vanishes on a torus") {
  Mesh m = build_periodic_rectangle(2, 2, 1.0, 1.0, true, true);
  Discretization d = make_discretization(m, 6);
  FunctionSpace v0 = build_space(m, Family::Lagrange, 2, false);
  FunctionSpace v1 = build_space(m, Family::BDM, 1, false);
  SpMat bt = boundary_tangent(d, v0, v1);
  CHECK(Eigen::MatrixXd(bt).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("divergence and curl functionals of constants vanish on restricted spaces") {
  Mesh m = build_disk(2);
  Discretization d = make_discretization(m, 6);
  FunctionSpace v1r = build_space(m, Family::BDM, 1, true);
  FunctionSpace v0r = build_space(m, Family::Lagrange, 2, true);

  // <div w, 1> = net flux through the boundary = 0 when w.n = 0 there
  ScalarQuad one = at_quad(d, [](Vec2) { return 1.0; });
  Vector dv = lin_div(d, v1r, one);
  CHECK(dv.cwiseAbs().maxCoeff() < 1e-13);

  // <grad_perp g, c> integrates the tangential derivative of g along the
  // boundary, which is zero when g vanishes there
  VectorQuad c;
  c.v.assign(one.v.size(), Vec2{0.4, -1.1});
  Vector cv = lin_curl(d, v0r, c);
  CHECK(cv.cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("integration by parts without boundary term") {
  Mesh m = build_disk(2);
  Discretization d = make_discretization(m, 6);
  FunctionSpace v0 = build_space(m, Family::Lagrange, 2, false);
  FunctionSpace v1r = build_space(m, Family::BDM, 1, true);
  Field u(v1r, random_vector(v1r.dim, 3));

  Vector lhs = lin_grad(d, v0, at_quad_vector(d, u));
  Vector rhs = -lin_mass(d, v0, at_quad_divergence(d, u));
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("perp projection is antisymmetric") {
  Mesh m = build_periodic_rectangle(3, 3, 1.0, 1.0, true, true);
  Discretization d = make_discretization(m, 6);
  FunctionSpace v1 = build_space(m, Family::BDM, 1, false);
  ScalarQuad q = at_quad(d, [](Vec2 p) { return 1.0 + 0.3 * std::sin(2 * M_PI * p.x); });
  SpMat a = perp_proj(d, v1, v1, q);
  CHECK((Eigen::MatrixXd(a) + Eigen::MatrixXd(a).transpose()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("divergence forms are transposes of each other") {
  Mesh m = build_disk(1);
  Discretization d = make_discretization(m, 6);
  FunctionSpace v1 = build_space(m, Family::BDM, 1, true);
  FunctionSpace v2 = build_space(m, Family::DiscontinuousLagrange, 0, false);
  SpMat a = div_form(d, v1, v2);
  SpMat b = div_form_t(d, v2, v1);
  CHECK((Eigen::MatrixXd(a) - Eigen::MatrixXd(b).transpose()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("restricted assembly equals full assembly with boundary rows and columns removed") {
  Mesh m = build_disk(1);
  Discretization d = make_discretization(m, 6);
  FunctionSpace full = build_space(m, Family::BDM, 1, false);
  FunctionSpace res = build_space(m, Family::BDM, 1, true);
  Eigen::MatrixXd mf = Eigen::MatrixXd(mass_matrix(d, full));
  Eigen::MatrixXd mr = Eigen::MatrixXd(mass_matrix(d, res));
  for (int i = 0; i < full.dim; ++i) {
    const int ir = res.active_of_full[i];
    if (ir < 0) continue;
    for (int j = 0; j < full.dim; ++j) {
      const int jr = res.active_of_full[j];
      if (jr < 0) continue;
      CHECK(std::abs(mr(ir, jr) - mf(i, j)) < 1e-14);
    }
  }
}

TEST_CASE("sparse solve matches a dense oracle") {
  Mesh m = build_periodic_rectangle(1, 1, 1.0, 1.0, false, false);
  Discretization d = make_discretization(m, 6);
  FunctionSpace v0 = build_space(m, Family::Lagrange, 2, false);
  SpMat a = mass_matrix(d, v0);
  Vector b = random_vector(v0.dim, 17);
  Vector x = sparse_solve(a, b, true);
  Vector x_lu = sparse_solve(a, b, false);
  Vector x_dense = Eigen::MatrixXd(a).partialPivLu().solve(b);
  CHECK((x - x_dense).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((x_lu - x_dense).cwiseAbs().maxCoeff() < 1e-12);

  Factorized fac(a);
  CHECK((fac.solve(b) - x_dense).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("projection reproduces representable functions") {
  Mesh m = build_disk(1);
  Discretization d = make_discretization(m, 6);
  FunctionSpace v0 = build_space(m, Family::Lagrange, 2, false);
  FunctionSpace v1 = build_space(m, Family::BDM, 1, false);
  FunctionSpace v2 = build_space(m, Family::DiscontinuousLagrange, 0, false);

  auto quad = [](Vec2 p) { return 1.0 + p.x - 2 * p.y + 0.5 * p.x * p.x + p.x * p.y; };
  Field f0 = project(d, v0, quad);
  CHECK(l2_error(d, f0, quad) < 1e-13);

  Field f1 = project(d, v1, std::function<Vec2(Vec2)>([](Vec2 p) {
                       return Vec2{1.0 + 2 * p.x - p.y, 0.5 - p.x + 3 * p.y};
                     }));
  VectorQuad uv = at_quad_vector(d, f1);
  ScalarQuad diff = at_quad(d, [](Vec2) { return 0.0; });
  for (std::size_t i = 0; i < uv.v.size(); ++i) {
    const Vec2 exact = {1.0 + 2 * d.xq[i].x - d.xq[i].y, 0.5 - d.xq[i].x + 3 * d.xq[i].y};
    diff.v[i] = dot(uv.v[i] - exact, uv.v[i] - exact);
  }
  CHECK(std::sqrt(integrate(d, diff)) < 1e-13);

  Field f2 = project(d, v2, [](Vec2) { return 4.5; });
  CHECK(l2_error(d, f2, [](Vec2) { return 4.5; }) < 1e-13);
}

TEST_CASE("CG2 projection of a smooth function converges at third order") {
  auto f = [](Vec2 p) { return std::sin(2 * M_PI * p.x); };
  double errs[2];
  int idx = 0;
  for (int n : {8, 16}) {
    Mesh m = build_periodic_rectangle(n, n, 1.0, 1.0, false, false);
    Discretization d = make_discretization(m, 8);
    FunctionSpace v0 = build_space(m, Family::Lagrange, 2, false);
    errs[idx++] = l2_error(d, project(d, v0, f), f);
  }
  const double ratio = errs[0] / errs[1];
  CHECK(ratio > 6.5);
  CHECK(ratio < 9.5);
}

TEST_CASE("divergence of BDM lands in DG exactly") {
  Mesh m = build_disk(2);
  Discretization d = make_discretization(m, 6);
  FunctionSpace v1 = build_space(m, Family::BDM, 1, false);
  FunctionSpace v2 = build_space(m, Family::DiscontinuousLagrange, 0, false);
  Field u(v1, random_vector(v1.dim, 23));

  Vector w = sparse_solve(mass_matrix(d, v2), div_form_t(d, v2, v1) * u.coeffs, true);
  Field div_u(v2, w);
  ScalarQuad a = at_quad(d, div_u);
  ScalarQuad b = at_quad_divergence(d, u);
  for (std::size_t i = 0; i < a.v.size(); ++i) CHECK(std::abs(a.v[i] - b.v[i]) < 1e-11);
}

TEST_CASE("perp gradient of the restricted scalar space lands in the restricted flux space") {
  Mesh m = build_disk(2);
  Discretization d = make_discretization(m, 6);
  FunctionSpace v0r = build_space(m, Family::Lagrange, 2, true);
  FunctionSpace v1r = build_space(m, Family::BDM, 1, true);
  Field g(v0r, random_vector(v0r.dim, 29));

  VectorQuad gp = at_quad_gradient(d, g);
  for (Vec2& v : gp.v) v = perp(v);
  Field u = project(d, v1r, gp);
  VectorQuad uq = at_quad_vector(d, u);
  ScalarQuad diff = at_quad(d, [](Vec2) { return 0.0; });
  for (std::size_t i = 0; i < uq.v.size(); ++i)
    diff.v[i] = dot(uq.v[i] - gp.v[i], uq.v[i] - gp.v[i]);
  CHECK(std::sqrt(integrate(d, diff)) < 1e-11);
}

TEST_CASE("boundary tangent matrix is consistent with its vector form") {
  Mesh m = build_disk(1);
  Discretization d = make_discretization(m, 6);
  FunctionSpace v0 = build_space(m, Family::Lagrange, 2, false);
  FunctionSpace v1 = build_space(m, Family::BDM, 1, false);
  Field u(v1, random_vector(v1.dim, 31));
  Vector a = boundary_tangent(d, v0, v1) * u.coeffs;
  Vector b = boundary_tangent_vector(d, v0, u);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("integrate recovers the domain area") {
  Mesh m = build_periodic_rectangle(3, 2, 2.5, 0.5, true, false);
  Discretization d = make_discretization(m, 6);
  ScalarQuad one = at_quad(d, [](Vec2) { return 1.0; });
  CHECK(integrate(d, one) == doctest::Approx(1.25).epsilon(1e-13));
}
