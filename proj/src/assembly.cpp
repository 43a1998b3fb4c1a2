#include "swe/assembly.hpp"

#include <stdexcept>

namespace swe {

Discretization make_discretization(const Mesh& mesh, int exactness) {
  Discretization d;
  d.mesh = &mesh;
  d.rule = quadrature_rule(exactness);
  d.nq = static_cast<int>(d.rule.points.size());
  d.geom.resize(mesh.n_cells());
  d.wdet.resize(mesh.n_cells() * d.nq);
  d.xq.resize(mesh.n_cells() * d.nq);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    d.geom[c] = cell_geometry(mesh, c);
    for (int q = 0; q < d.nq; ++q) {
      d.wdet[d.index(c, q)] = d.rule.weights[q] * d.geom[c].det;
      d.xq[d.index(c, q)] = d.geom[c].map(d.rule.points[q]);
    }
  }

  std::vector<double> gp, gw;
  gauss_legendre(std::max(2, exactness), gp, gw);
  const Vec2 ref_vertex[3] = {{0, 0}, {1, 0}, {0, 1}};
  for (int e : mesh.boundary_edges) {
    const Mesh::Edge& edge = mesh.edges[e];
    Discretization::BoundaryQuad bq;
    bq.edge = e;
    bq.cell = edge.cells[0];
    bq.local = edge.local_edge[0];
    const Vec2 a = ref_vertex[(bq.local + 1) % 3], b = ref_vertex[(bq.local + 2) % 3];
    for (std::size_t i = 0; i < gp.size(); ++i) {
      bq.ref_pts.push_back(a + gp[i] * (b - a));
      bq.w.push_back(gw[i] * edge.length);
    }
    bq.tangent = perp(edge.normal);
    d.boundary.push_back(bq);
  }
  return d;
}

namespace {

// Physical tabulation of one cell's basis at the shared rule points.
struct PhysBasis {
  int ndof = 0;
  std::vector<double> val;   // [q*ndof + l]
  std::vector<Vec2> grad;
  std::vector<Vec2> vec;
  std::vector<double> div;
};

// Reference tabulation shared by all cells.
struct RefTab {
  std::vector<std::vector<double>> val;
  std::vector<std::vector<Vec2>> grad;
  std::vector<std::vector<Vec2>> vec;
  std::vector<std::vector<double>> div;
};

RefTab ref_tabulate(const FunctionSpace& sp, const std::vector<Vec2>& pts) {
  RefTab t;
  if (sp.scalar())
    sp.ref.tabulate(pts, t.val, t.grad);
  else
    sp.ref.tabulate_vector(pts, t.vec, t.div);
  return t;
}

void fill_phys(const FunctionSpace& sp, const RefTab& ref, const CellGeometry& geo, int cell,
               int nq, PhysBasis& out) {
  const int ndof = sp.ndof_cell();
  out.ndof = ndof;
  if (sp.scalar()) {
    out.val.resize(nq * ndof);
    out.grad.resize(nq * ndof);
    for (int q = 0; q < nq; ++q)
      for (int l = 0; l < ndof; ++l) {
        const double s = sp.sign(cell, l);
        out.val[q * ndof + l] = s * ref.val[q][l];
        out.grad[q * ndof + l] = s * geo.push_gradient(ref.grad[q][l]);
      }
  } else {
    out.vec.resize(nq * ndof);
    out.div.resize(nq * ndof);
    for (int q = 0; q < nq; ++q)
      for (int l = 0; l < ndof; ++l) {
        const double s = sp.sign(cell, l);
        out.vec[q * ndof + l] = s * geo.piola(ref.vec[q][l]);
        out.div[q * ndof + l] = s * ref.div[q][l] / geo.det;
      }
  }
}

// kernel(q_flat_index, basisA, i, basisB, j) -> integrand (without weight)
template <class Kernel>
SpMat assemble_pair(const Discretization& d, const FunctionSpace& rows,
                    const FunctionSpace& cols, Kernel kernel) {
  if (rows.mesh != d.mesh || cols.mesh != d.mesh)
    throw std::invalid_argument("assemble: space/mesh mismatch");
  std::vector<Eigen::Triplet<double>> trips;
  const RefTab rt = ref_tabulate(rows, d.rule.points);
  const RefTab ct = ref_tabulate(cols, d.rule.points);
  PhysBasis ra, cb;
  const int ni = rows.ndof_cell(), nj = cols.ndof_cell();
  for (int c = 0; c < d.mesh->n_cells(); ++c) {
    fill_phys(rows, rt, d.geom[c], c, d.nq, ra);
    fill_phys(cols, ct, d.geom[c], c, d.nq, cb);
    for (int i = 0; i < ni; ++i) {
      const int gi = rows.dof(c, i);
      if (gi < 0) continue;
      for (int j = 0; j < nj; ++j) {
        const int gj = cols.dof(c, j);
        if (gj < 0) continue;
        double acc = 0;
        for (int q = 0; q < d.nq; ++q)
          acc += d.wdet[d.index(c, q)] * kernel(d.index(c, q), q, ra, i, cb, j);
        trips.emplace_back(gi, gj, acc);
      }
    }
  }
  SpMat m(rows.dim, cols.dim);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

template <class Kernel>
Vector assemble_linear(const Discretization& d, const FunctionSpace& rows, Kernel kernel) {
  if (rows.mesh != d.mesh) throw std::invalid_argument("assemble: space/mesh mismatch");
  Vector out = Vector::Zero(rows.dim);
  const RefTab rt = ref_tabulate(rows, d.rule.points);
  PhysBasis ra;
  for (int c = 0; c < d.mesh->n_cells(); ++c) {
    fill_phys(rows, rt, d.geom[c], c, d.nq, ra);
    for (int i = 0; i < rows.ndof_cell(); ++i) {
      const int gi = rows.dof(c, i);
      if (gi < 0) continue;
      double acc = 0;
      for (int q = 0; q < d.nq; ++q)
        acc += d.wdet[d.index(c, q)] * kernel(d.index(c, q), q, ra, i);
      out[gi] += acc;
    }
  }
  return out;
}

inline double sval(const PhysBasis& b, int q, int l) { return b.val[q * b.ndof + l]; }
inline Vec2 sgrad(const PhysBasis& b, int q, int l) { return b.grad[q * b.ndof + l]; }
inline Vec2 vvec(const PhysBasis& b, int q, int l) { return b.vec[q * b.ndof + l]; }
inline double vdiv(const PhysBasis& b, int q, int l) { return b.div[q * b.ndof + l]; }

}  // namespace

ScalarQuad at_quad(const Discretization& d, const std::function<double(Vec2)>& f) {
  ScalarQuad out;
  out.v.resize(d.xq.size());
  for (std::size_t i = 0; i < d.xq.size(); ++i) out.v[i] = f(d.xq[i]);
  return out;
}

ScalarQuad at_quad(const Discretization& d, const Field& field) {
  ScalarQuad out;
  out.v.resize(d.xq.size());
  std::vector<double> vals;
  for (int c = 0; c < d.mesh->n_cells(); ++c) {
    evaluate_scalar(field, c, d.rule.points, vals);
    for (int q = 0; q < d.nq; ++q) out.v[d.index(c, q)] = vals[q];
  }
  return out;
}

ScalarQuad at_quad_divergence(const Discretization& d, const Field& field) {
  ScalarQuad out;
  out.v.resize(d.xq.size());
  std::vector<Vec2> vals;
  std::vector<double> divs;
  for (int c = 0; c < d.mesh->n_cells(); ++c) {
    evaluate_vector(field, c, d.rule.points, vals, &divs);
    for (int q = 0; q < d.nq; ++q) out.v[d.index(c, q)] = divs[q];
  }
  return out;
}

VectorQuad at_quad_vector(const Discretization& d, const Field& field) {
  VectorQuad out;
  out.v.resize(d.xq.size());
  std::vector<Vec2> vals;
  for (int c = 0; c < d.mesh->n_cells(); ++c) {
    evaluate_vector(field, c, d.rule.points, vals);
    for (int q = 0; q < d.nq; ++q) out.v[d.index(c, q)] = vals[q];
  }
  return out;
}

VectorQuad at_quad_gradient(const Discretization& d, const Field& field) {
  VectorQuad out;
  out.v.resize(d.xq.size());
  std::vector<double> vals;
  std::vector<Vec2> grads;
  for (int c = 0; c < d.mesh->n_cells(); ++c) {
    evaluate_scalar(field, c, d.rule.points, vals, &grads);
    for (int q = 0; q < d.nq; ++q) out.v[d.index(c, q)] = grads[q];
  }
  return out;
}

SpMat mass_matrix(const Discretization& d, const FunctionSpace& s) {
  if (s.scalar())
    return assemble_pair(d, s, s, [](int, int q, const PhysBasis& a, int i, const PhysBasis& b, int j) {
      return sval(a, q, i) * sval(b, q, j);
    });
  return assemble_pair(d, s, s, [](int, int q, const PhysBasis& a, int i, const PhysBasis& b, int j) {
    return dot(vvec(a, q, i), vvec(b, q, j));
  });
}

SpMat div_form(const Discretization& d, const FunctionSpace& v1, const FunctionSpace& v2) {
  return assemble_pair(d, v1, v2, [](int, int q, const PhysBasis& a, int i, const PhysBasis& b, int j) {
    return vdiv(a, q, i) * sval(b, q, j);
  });
}

SpMat div_form_t(const Discretization& d, const FunctionSpace& v2, const FunctionSpace& v1) {
  return assemble_pair(d, v2, v1, [](int, int q, const PhysBasis& a, int i, const PhysBasis& b, int j) {
    return sval(a, q, i) * vdiv(b, q, j);
  });
}

SpMat curl_form(const Discretization& d, const FunctionSpace& v0, const FunctionSpace& v1) {
  return assemble_pair(d, v0, v1, [](int, int q, const PhysBasis& a, int i, const PhysBasis& b, int j) {
    return dot(perp(sgrad(a, q, i)), vvec(b, q, j));
  });
}

SpMat perp_proj(const Discretization& d, const FunctionSpace& test, const FunctionSpace& trial,
                const ScalarQuad& qhat) {
  return assemble_pair(d, test, trial,
                       [&](int x, int q, const PhysBasis& a, int i, const PhysBasis& b, int j) {
                         return qhat.v[x] * dot(vvec(a, q, i), perp(vvec(b, q, j)));
                       });
}

SpMat grad_scalar(const Discretization& d, const FunctionSpace& v0, const FunctionSpace& v1,
                  const ScalarQuad& qhat) {
  return assemble_pair(d, v0, v1,
                       [&](int x, int q, const PhysBasis& a, int i, const PhysBasis& b, int j) {
                         return qhat.v[x] * dot(sgrad(a, q, i), vvec(b, q, j));
                       });
}

SpMat weighted_mass(const Discretization& d, const FunctionSpace& v0, const ScalarQuad& dhat) {
  return assemble_pair(d, v0, v0,
                       [&](int x, int q, const PhysBasis& a, int i, const PhysBasis& b, int j) {
                         return dhat.v[x] * sval(a, q, i) * sval(b, q, j);
                       });
}

SpMat boundary_tangent(const Discretization& d, const FunctionSpace& v0,
                       const FunctionSpace& v1) {
  if (v0.mesh != d.mesh || v1.mesh != d.mesh)
    throw std::invalid_argument("assemble: space/mesh mismatch");
  std::vector<Eigen::Triplet<double>> trips;
  for (const auto& bq : d.boundary) {
    std::vector<std::vector<double>> gval;
    std::vector<std::vector<Vec2>> ggrad, uval;
    std::vector<std::vector<double>> udiv;
    v0.ref.tabulate(bq.ref_pts, gval, ggrad);
    v1.ref.tabulate_vector(bq.ref_pts, uval, udiv);
    const CellGeometry& geo = d.geom[bq.cell];
    for (int i = 0; i < v0.ndof_cell(); ++i) {
      const int gi = v0.dof(bq.cell, i);
      if (gi < 0) continue;
      for (int j = 0; j < v1.ndof_cell(); ++j) {
        const int gj = v1.dof(bq.cell, j);
        if (gj < 0) continue;
        double acc = 0;
        for (std::size_t q = 0; q < bq.ref_pts.size(); ++q)
          acc += bq.w[q] * v0.sign(bq.cell, i) * gval[q][i] *
                 dot(bq.tangent, v1.sign(bq.cell, j) * geo.piola(uval[q][j]));
        trips.emplace_back(gi, gj, acc);
      }
    }
  }
  SpMat m(v0.dim, v1.dim);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

SpMat div_dot_vec(const Discretization& d, const FunctionSpace& v1, const FunctionSpace& v1b,
                  const VectorQuad& c) {
  return assemble_pair(d, v1, v1b,
                       [&](int x, int q, const PhysBasis& a, int i, const PhysBasis& b, int j) {
                         return vdiv(a, q, i) * dot(c.v[x], vvec(b, q, j));
                       });
}

SpMat perp_coeff(const Discretization& d, const FunctionSpace& v1, const FunctionSpace& v0,
                 const VectorQuad& c) {
  return assemble_pair(d, v1, v0,
                       [&](int x, int q, const PhysBasis& a, int i, const PhysBasis& b, int j) {
                         return sval(b, q, j) * dot(vvec(a, q, i), perp(c.v[x]));
                       });
}

SpMat vec_mass_weighted(const Discretization& d, const FunctionSpace& v1,
                        const FunctionSpace& v1b, const ScalarQuad& a) {
  return assemble_pair(d, v1, v1b,
                       [&](int x, int q, const PhysBasis& ta, int i, const PhysBasis& tb, int j) {
                         return a.v[x] * dot(vvec(ta, q, i), vvec(tb, q, j));
                       });
}

SpMat vec_scalar(const Discretization& d, const FunctionSpace& v1, const FunctionSpace& v2,
                 const VectorQuad& c) {
  return assemble_pair(d, v1, v2,
                       [&](int x, int q, const PhysBasis& a, int i, const PhysBasis& b, int j) {
                         return dot(vvec(a, q, i), c.v[x]) * sval(b, q, j);
                       });
}

SpMat scalar_pair(const Discretization& d, const FunctionSpace& v0, const FunctionSpace& v2,
                  const ScalarQuad& a) {
  return assemble_pair(d, v0, v2,
                       [&](int x, int q, const PhysBasis& ta, int i, const PhysBasis& tb, int j) {
                         return a.v[x] * sval(ta, q, i) * sval(tb, q, j);
                       });
}

SpMat grad_dot_coeff(const Discretization& d, const FunctionSpace& v0, const FunctionSpace& v0b,
                     const VectorQuad& c) {
  return assemble_pair(d, v0, v0b,
                       [&](int x, int q, const PhysBasis& a, int i, const PhysBasis& b, int j) {
                         return dot(sgrad(a, q, i), c.v[x]) * sval(b, q, j);
                       });
}

SpMat vec_dot_gradscalar(const Discretization& d, const FunctionSpace& v1,
                         const FunctionSpace& v0, const VectorQuad& a, const VectorQuad& b) {
  return assemble_pair(d, v1, v0,
                       [&](int x, int q, const PhysBasis& ta, int i, const PhysBasis& tb, int j) {
                         return dot(vvec(ta, q, i), a.v[x]) * dot(b.v[x], sgrad(tb, q, j));
                       });
}

SpMat vec_dyad(const Discretization& d, const FunctionSpace& v1, const FunctionSpace& v1b,
               const VectorQuad& a, const VectorQuad& b) {
  return assemble_pair(d, v1, v1b,
                       [&](int x, int q, const PhysBasis& ta, int i, const PhysBasis& tb, int j) {
                         return dot(vvec(ta, q, i), a.v[x]) * dot(vvec(tb, q, j), b.v[x]);
                       });
}

SpMat grad_dyad(const Discretization& d, const FunctionSpace& v0, const FunctionSpace& v0b,
                const VectorQuad& a, const VectorQuad& b) {
  return assemble_pair(d, v0, v0b,
                       [&](int x, int q, const PhysBasis& ta, int i, const PhysBasis& tb, int j) {
                         return dot(sgrad(ta, q, i), a.v[x]) * dot(b.v[x], sgrad(tb, q, j));
                       });
}

SpMat grad_vec_scalar(const Discretization& d, const FunctionSpace& v0, const FunctionSpace& v2,
                      const VectorQuad& a) {
  return assemble_pair(d, v0, v2,
                       [&](int x, int q, const PhysBasis& ta, int i, const PhysBasis& tb, int j) {
                         return dot(sgrad(ta, q, i), a.v[x]) * sval(tb, q, j);
                       });
}

Vector lin_mass(const Discretization& d, const FunctionSpace& s, const ScalarQuad& f) {
  return assemble_linear(d, s, [&](int x, int q, const PhysBasis& a, int i) {
    return sval(a, q, i) * f.v[x];
  });
}

Vector lin_mass(const Discretization& d, const FunctionSpace& s, const VectorQuad& f) {
  return assemble_linear(d, s, [&](int x, int q, const PhysBasis& a, int i) {
    return dot(vvec(a, q, i), f.v[x]);
  });
}

Vector lin_div(const Discretization& d, const FunctionSpace& v1, const ScalarQuad& f) {
  return assemble_linear(d, v1, [&](int x, int q, const PhysBasis& a, int i) {
    return vdiv(a, q, i) * f.v[x];
  });
}

Vector lin_curl(const Discretization& d, const FunctionSpace& v0, const VectorQuad& f) {
  return assemble_linear(d, v0, [&](int x, int q, const PhysBasis& a, int i) {
    return dot(perp(sgrad(a, q, i)), f.v[x]);
  });
}

Vector lin_grad(const Discretization& d, const FunctionSpace& v0, const VectorQuad& f) {
  return assemble_linear(d, v0, [&](int x, int q, const PhysBasis& a, int i) {
    return dot(sgrad(a, q, i), f.v[x]);
  });
}

Vector boundary_tangent_vector(const Discretization& d, const FunctionSpace& v0,
                               const Field& u) {
  Vector out = Vector::Zero(v0.dim);
  std::vector<Vec2> uval;
  std::vector<std::vector<double>> gval;
  std::vector<std::vector<Vec2>> ggrad;
  for (const auto& bq : d.boundary) {
    v0.ref.tabulate(bq.ref_pts, gval, ggrad);
    evaluate_vector(u, bq.cell, bq.ref_pts, uval);
    for (int i = 0; i < v0.ndof_cell(); ++i) {
      const int gi = v0.dof(bq.cell, i);
      if (gi < 0) continue;
      double acc = 0;
      for (std::size_t q = 0; q < bq.ref_pts.size(); ++q)
        acc += bq.w[q] * v0.sign(bq.cell, i) * gval[q][i] * dot(bq.tangent, uval[q]);
      out[gi] += acc;
    }
  }
  return out;
}

Vector sparse_solve(const SpMat& a, const Vector& b, bool spd) {
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw std::invalid_argument("sparse_solve: dimension mismatch");
  if (spd) {
    Eigen::SimplicialLDLT<SpMat> chol(a);
    if (chol.info() != Eigen::Success)
      throw std::runtime_error("sparse_solve: LDLT factorization failed (matrix not SPD?)");
    return chol.solve(b);
  }
  return Factorized(a).solve(b);
}

Factorized::Factorized(const SpMat& a) : lu_(std::make_shared<Eigen::SparseLU<SpMat>>()) {
  lu_->analyzePattern(a);
  lu_->factorize(a);
  if (lu_->info() != Eigen::Success)
    throw std::runtime_error("sparse factorization failed: " + lu_->lastErrorMessage());
}

Vector Factorized::solve(const Vector& b) const {
  Vector x = lu_->solve(b);
  if (lu_->info() != Eigen::Success) throw std::runtime_error("sparse solve failed");
  return x;
}

Field project(const Discretization& d, const FunctionSpace& s, const ScalarQuad& f) {
  return Field(s, sparse_solve(mass_matrix(d, s), lin_mass(d, s, f), true));
}

Field project(const Discretization& d, const FunctionSpace& s, const VectorQuad& f) {
  return Field(s, sparse_solve(mass_matrix(d, s), lin_mass(d, s, f), true));
}

Field project(const Discretization& d, const FunctionSpace& s,
              const std::function<double(Vec2)>& f) {
  return project(d, s, at_quad(d, f));
}

Field project(const Discretization& d, const FunctionSpace& s,
              const std::function<Vec2(Vec2)>& f) {
  VectorQuad fq;
  fq.v.resize(d.xq.size());
  for (std::size_t i = 0; i < d.xq.size(); ++i) fq.v[i] = f(d.xq[i]);
  return project(d, s, fq);
}

double integrate(const Discretization& d, const ScalarQuad& f) {
  double acc = 0;
  for (std::size_t i = 0; i < f.v.size(); ++i) acc += d.wdet[i] * f.v[i];
  return acc;
}

}  // namespace swe
