#pragma once

#include <Eigen/Dense>
#include <vector>

#include "swe/vec2.hpp"

namespace swe {

enum class Family { Lagrange, BDM, DiscontinuousLagrange };

// Reference-triangle element. Basis functions are stored as coefficients
// against the monomial basis; tabulation at arbitrary points is derived.
// BDM edge DOFs are moments of the normal component against Legendre
// polynomials, parametrized along the CCW boundary traversal and taken
// against the outward normal, so that the Piola map carries them to the
// corresponding physical-edge functionals exactly.
struct ReferenceElement {
  struct Dof {
    int entity_dim;    // 0 vertex, 1 edge, 2 interior
    int entity_index;  // local vertex/edge index
    int order;         // node position along edge (Lagrange) or moment degree (BDM)
  };

  Family family = Family::Lagrange;
  int degree = 0;
  int dof_count = 0;
  bool vector_valued = false;
  std::vector<Dof> dofs;
  double vandermonde_cond = 0.0;
  Eigen::MatrixXd coef;  // basis_i = sum_j coef(i,j) mono_j

  // Scalar families: values and reference gradients, [point][dof].
  void tabulate(const std::vector<Vec2>& pts,
                std::vector<std::vector<double>>& val,
                std::vector<std::vector<Vec2>>& grad) const;
  // BDM: vector values and divergences, [point][dof].
  void tabulate_vector(const std::vector<Vec2>& pts,
                       std::vector<std::vector<Vec2>>& val,
                       std::vector<std::vector<double>>& div) const;
};

// Supported: Lagrange 1..3, BDM 1..2, DiscontinuousLagrange 0..1.
ReferenceElement build_reference(Family family, int degree);

// Legendre-type edge moment functions on [0,1]; mu_j(1-s) = (-1)^j mu_j(s).
double edge_moment_function(int j, double s);

}  // namespace swe
