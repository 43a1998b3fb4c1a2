#pragma once

#include <Eigen/Core>
#include <vector>

#include "swe/element.hpp"
#include "swe/mesh.hpp"

namespace swe {

// Affine map from the reference triangle to a physical cell.
struct CellGeometry {
  Vec2 p0;
  double j00, j01, j10, j11;  // jacobian columns (p1-p0), (p2-p0)
  double det;

  Vec2 map(Vec2 r) const {
    return {p0.x + j00 * r.x + j01 * r.y, p0.y + j10 * r.x + j11 * r.y};
  }
  // J^{-T} g: reference gradient to physical gradient
  Vec2 push_gradient(Vec2 g) const {
    return {(j11 * g.x - j10 * g.y) / det, (-j01 * g.x + j00 * g.y) / det};
  }
  // contravariant Piola: J v / det J, preserves normal fluxes
  Vec2 piola(Vec2 v) const {
    return {(j00 * v.x + j01 * v.y) / det, (j10 * v.x + j11 * v.y) / det};
  }
};

CellGeometry cell_geometry(const Mesh& mesh, int cell);

// Global function space over a mesh. Restricted spaces drop the boundary
// DOFs from the numbering entirely (slip boundary by elimination), so a
// coefficient vector of a restricted space cannot represent any boundary
// flux. Cell-local DOFs carry a +-1 sign that reconciles the reference
// element's CCW edge conventions with the mesh's global edge orientation.
struct FunctionSpace {
  const Mesh* mesh = nullptr;
  ReferenceElement ref;
  bool restricted = false;
  int dim = 0;       // active (numbered) DOFs
  int full_dim = 0;  // before restriction
  std::vector<int> cell_dofs;      // [cell * ndof + local] -> active index, -1 if eliminated
  std::vector<double> cell_sign;   // same layout
  std::vector<int> active_of_full; // -1 for eliminated

  int ndof_cell() const { return ref.dof_count; }
  int dof(int cell, int local) const { return cell_dofs[cell * ref.dof_count + local]; }
  double sign(int cell, int local) const { return cell_sign[cell * ref.dof_count + local]; }
  bool scalar() const { return !ref.vector_valued; }
};

FunctionSpace build_space(const Mesh& mesh, Family family, int degree, bool restricted);

struct Field {
  const FunctionSpace* space = nullptr;
  Eigen::VectorXd coeffs;

  Field() = default;
  explicit Field(const FunctionSpace& s)
      : space(&s), coeffs(Eigen::VectorXd::Zero(s.dim)) {}
  Field(const FunctionSpace& s, Eigen::VectorXd c) : space(&s), coeffs(std::move(c)) {}
};

// Point evaluation at reference points of one cell (physical values).
void evaluate_scalar(const Field& f, int cell, const std::vector<Vec2>& ref_pts,
                     std::vector<double>& values, std::vector<Vec2>* gradients = nullptr);
void evaluate_vector(const Field& f, int cell, const std::vector<Vec2>& ref_pts,
                     std::vector<Vec2>& values, std::vector<double>* divergences = nullptr);

}  // namespace swe
