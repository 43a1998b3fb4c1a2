#include "swe/space.hpp"

#include <stdexcept>

namespace swe {

CellGeometry cell_geometry(const Mesh& mesh, int cell) {
  const Vec2 p0 = mesh.point(cell, 0), p1 = mesh.point(cell, 1), p2 = mesh.point(cell, 2);
  CellGeometry g;
  g.p0 = p0;
  g.j00 = p1.x - p0.x;
  g.j10 = p1.y - p0.y;
  g.j01 = p2.x - p0.x;
  g.j11 = p2.y - p0.y;
  g.det = g.j00 * g.j11 - g.j01 * g.j10;
  return g;
}

FunctionSpace build_space(const Mesh& mesh, Family family, int degree, bool restricted) {
  FunctionSpace sp;
  sp.mesh = &mesh;
  sp.ref = build_reference(family, degree);
  sp.restricted = restricted;
  if (restricted && family == Family::DiscontinuousLagrange)
    throw std::invalid_argument("DG spaces have no boundary DOFs to restrict");

  const int ndof = sp.ref.dof_count;
  const int per_edge = family == Family::BDM ? degree + 1
                       : family == Family::Lagrange ? degree - 1
                                                    : 0;
  int n_interior = 0;
  for (const auto& d : sp.ref.dofs) n_interior += d.entity_dim == 2 ? 1 : 0;

  const bool has_vertex_dofs = family == Family::Lagrange;
  const int vertex_base = 0;
  const int edge_base = has_vertex_dofs ? mesh.n_vertices : 0;
  const int cell_base = edge_base + per_edge * mesh.n_edges();
  sp.full_dim = cell_base + n_interior * mesh.n_cells();

  sp.cell_dofs.assign(mesh.n_cells() * ndof, -1);
  sp.cell_sign.assign(mesh.n_cells() * ndof, 1.0);

  std::vector<int> full(mesh.n_cells() * ndof, -1);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    for (int l = 0; l < ndof; ++l) {
      const auto& d = sp.ref.dofs[l];
      const int idx = c * ndof + l;
      switch (d.entity_dim) {
        case 0:
          full[idx] = vertex_base + mesh.point_id[mesh.cells[c][d.entity_index]];
          break;
        case 1: {
          const int e = mesh.cell_edges[c][d.entity_index];
          const int orient = mesh.cell_edge_sign[c][d.entity_index];
          if (family == Family::BDM) {
            full[idx] = edge_base + e * per_edge + d.order;
            // orientation flip negates the normal and reverses the moment
            // parameter; even moments pick up the sign, odd ones cancel
            if (orient < 0) sp.cell_sign[idx] = d.order % 2 == 0 ? -1.0 : 1.0;
          } else {
            const int pos = orient > 0 ? d.order : per_edge - 1 - d.order;
            full[idx] = edge_base + e * per_edge + pos;
          }
          break;
        }
        default:
          full[idx] = cell_base + c * n_interior + d.order;
      }
    }
  }

  std::vector<char> active(sp.full_dim, 1);
  if (restricted) {
    if (has_vertex_dofs)
      for (int v = 0; v < mesh.n_vertices; ++v)
        if (mesh.boundary_vertex[v]) active[vertex_base + v] = 0;
    for (int e : mesh.boundary_edges)
      for (int j = 0; j < per_edge; ++j) active[edge_base + e * per_edge + j] = 0;
  }

  sp.active_of_full.assign(sp.full_dim, -1);
  int next = 0;
  for (int i = 0; i < sp.full_dim; ++i)
    if (active[i]) sp.active_of_full[i] = next++;
  sp.dim = next;

  for (std::size_t i = 0; i < full.size(); ++i)
    sp.cell_dofs[i] = sp.active_of_full[full[i]];
  return sp;
}

void evaluate_scalar(const Field& f, int cell, const std::vector<Vec2>& ref_pts,
                     std::vector<double>& values, std::vector<Vec2>* gradients) {
  const FunctionSpace& sp = *f.space;
  if (cell < 0 || cell >= sp.mesh->n_cells()) throw std::out_of_range("cell index");
  std::vector<std::vector<double>> val;
  std::vector<std::vector<Vec2>> grad;
  sp.ref.tabulate(ref_pts, val, grad);
  const CellGeometry geo = cell_geometry(*sp.mesh, cell);

  values.assign(ref_pts.size(), 0.0);
  if (gradients) gradients->assign(ref_pts.size(), Vec2{});
  for (std::size_t q = 0; q < ref_pts.size(); ++q)
    for (int l = 0; l < sp.ndof_cell(); ++l) {
      const int g = sp.dof(cell, l);
      if (g < 0) continue;
      const double c = sp.sign(cell, l) * f.coeffs[g];
      values[q] += c * val[q][l];
      if (gradients) (*gradients)[q] += c * geo.push_gradient(grad[q][l]);
    }
}

void evaluate_vector(const Field& f, int cell, const std::vector<Vec2>& ref_pts,
                     std::vector<Vec2>& values, std::vector<double>* divergences) {
  const FunctionSpace& sp = *f.space;
  if (cell < 0 || cell >= sp.mesh->n_cells()) throw std::out_of_range("cell index");
  std::vector<std::vector<Vec2>> val;
  std::vector<std::vector<double>> div;
  sp.ref.tabulate_vector(ref_pts, val, div);
  const CellGeometry geo = cell_geometry(*sp.mesh, cell);

  values.assign(ref_pts.size(), Vec2{});
  if (divergences) divergences->assign(ref_pts.size(), 0.0);
  for (std::size_t q = 0; q < ref_pts.size(); ++q)
    for (int l = 0; l < sp.ndof_cell(); ++l) {
      const int g = sp.dof(cell, l);
      if (g < 0) continue;
      const double c = sp.sign(cell, l) * f.coeffs[g];
      values[q] += c * geo.piola(val[q][l]);
      if (divergences) (*divergences)[q] += c * div[q][l] / geo.det;
    }
}

}  // namespace swe
