#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <functional>
#include <memory>
#include <vector>

#include "swe/quadrature.hpp"
#include "swe/space.hpp"

namespace swe {

using SpMat = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

// Shared quadrature context. All pairings in one run use the same rule;
// the conservation identities are exact only under that convention.
struct Discretization {
  const Mesh* mesh = nullptr;
  QuadratureRule rule;
  int nq = 0;
  std::vector<CellGeometry> geom;   // per cell
  std::vector<double> wdet;         // [cell*nq + q]
  std::vector<Vec2> xq;             // physical quadrature points, same layout

  struct BoundaryQuad {
    int edge, cell, local;
    std::vector<Vec2> ref_pts;  // in the incident cell's reference coords
    std::vector<double> w;      // gauss weight * edge length
    Vec2 tangent;               // n_perp, the CCW boundary tangent
  };
  std::vector<BoundaryQuad> boundary;

  int index(int cell, int q) const { return cell * nq + q; }
};

Discretization make_discretization(const Mesh& mesh, int exactness);

// Coefficient data sampled at the shared quadrature points, [cell*nq + q].
struct ScalarQuad { std::vector<double> v; };
struct VectorQuad { std::vector<Vec2> v; };

ScalarQuad at_quad(const Discretization& d, const std::function<double(Vec2)>& f);
ScalarQuad at_quad(const Discretization& d, const Field& scalar_field);
ScalarQuad at_quad_divergence(const Discretization& d, const Field& vector_field);
VectorQuad at_quad_vector(const Discretization& d, const Field& vector_field);
VectorQuad at_quad_gradient(const Discretization& d, const Field& scalar_field);

// --- bilinear forms (rows = test space, cols = trial space) ---

SpMat mass_matrix(const Discretization& d, const FunctionSpace& s);
// <div w, phi>, V1 x V2
SpMat div_form(const Discretization& d, const FunctionSpace& v1, const FunctionSpace& v2);
// <phi, div v>, V2 x V1 (the adjoint arrangement of div_form)
SpMat div_form_t(const Discretization& d, const FunctionSpace& v2, const FunctionSpace& v1);
// <grad_perp gamma, u>, V0 x V1
SpMat curl_form(const Discretization& d, const FunctionSpace& v0, const FunctionSpace& v1);
// <w, qhat v_perp>, V1 x V1 (antisymmetric for equal spaces)
SpMat perp_proj(const Discretization& d, const FunctionSpace& test, const FunctionSpace& trial,
                const ScalarQuad& qhat);
// <grad gamma, qhat v>, V0 x V1
SpMat grad_scalar(const Discretization& d, const FunctionSpace& v0, const FunctionSpace& v1,
                  const ScalarQuad& qhat);
// <gamma, dhat q>, V0 x V0
SpMat weighted_mass(const Discretization& d, const FunctionSpace& v0, const ScalarQuad& dhat);
// <<gamma, n_perp . u>>, V0 x V1, boundary only
SpMat boundary_tangent(const Discretization& d, const FunctionSpace& v0, const FunctionSpace& v1);

// --- jacobian blocks ---

// <div w, c . v>, V1 x V1
SpMat div_dot_vec(const Discretization& d, const FunctionSpace& v1, const FunctionSpace& v1b,
                  const VectorQuad& c);
// <w, gamma c_perp>, V1 x V0
SpMat perp_coeff(const Discretization& d, const FunctionSpace& v1, const FunctionSpace& v0,
                 const VectorQuad& c);
// <w, a v>, V1 x V1
SpMat vec_mass_weighted(const Discretization& d, const FunctionSpace& v1,
                        const FunctionSpace& v1b, const ScalarQuad& a);
// <w, c phi>, V1 x V2
SpMat vec_scalar(const Discretization& d, const FunctionSpace& v1, const FunctionSpace& v2,
                 const VectorQuad& c);
// <gamma, a phi>, V0 x V2
SpMat scalar_pair(const Discretization& d, const FunctionSpace& v0, const FunctionSpace& v2,
                  const ScalarQuad& a);
// <grad gamma . c, q>, V0 x V0
SpMat grad_dot_coeff(const Discretization& d, const FunctionSpace& v0, const FunctionSpace& v0b,
                     const VectorQuad& c);
// <(w . a)(b . grad q)>, V1 x V0
SpMat vec_dot_gradscalar(const Discretization& d, const FunctionSpace& v1,
                         const FunctionSpace& v0, const VectorQuad& a, const VectorQuad& b);
// <(w . a)(v . b)>, V1 x V1
SpMat vec_dyad(const Discretization& d, const FunctionSpace& v1, const FunctionSpace& v1b,
               const VectorQuad& a, const VectorQuad& b);
// <(grad gamma . a)(b . grad q)>, V0 x V0
SpMat grad_dyad(const Discretization& d, const FunctionSpace& v0, const FunctionSpace& v0b,
                const VectorQuad& a, const VectorQuad& b);
// <(grad gamma . a) phi>, V0 x V2
SpMat grad_vec_scalar(const Discretization& d, const FunctionSpace& v0, const FunctionSpace& v2,
                      const VectorQuad& a);

// --- linear functionals ---

Vector lin_mass(const Discretization& d, const FunctionSpace& s, const ScalarQuad& f);
Vector lin_mass(const Discretization& d, const FunctionSpace& s, const VectorQuad& f);
Vector lin_div(const Discretization& d, const FunctionSpace& v1, const ScalarQuad& f);
Vector lin_curl(const Discretization& d, const FunctionSpace& v0, const VectorQuad& f);
Vector lin_grad(const Discretization& d, const FunctionSpace& v0, const VectorQuad& f);
// <<gamma, n_perp . u>> as a vector over V0 test functions
Vector boundary_tangent_vector(const Discretization& d, const FunctionSpace& v0, const Field& u);

// --- solves ---

Vector sparse_solve(const SpMat& a, const Vector& b, bool spd = false);

// Reusable direct factorization (SparseLU).
class Factorized {
 public:
  Factorized() = default;
  explicit Factorized(const SpMat& a);
  Vector solve(const Vector& b) const;

 private:
  std::shared_ptr<Eigen::SparseLU<SpMat>> lu_;
};

// --- projections ---

Field project(const Discretization& d, const FunctionSpace& s,
              const std::function<double(Vec2)>& f);
Field project(const Discretization& d, const FunctionSpace& s,
              const std::function<Vec2(Vec2)>& f);
Field project(const Discretization& d, const FunctionSpace& s, const ScalarQuad& f);
Field project(const Discretization& d, const FunctionSpace& s, const VectorQuad& f);

// Integrals with the shared rule.
double integrate(const Discretization& d, const ScalarQuad& f);

}  // namespace swe
