#include "swe/element.hpp"

#include <cmath>
#include <stdexcept>

#include "swe/quadrature.hpp"

namespace swe {

namespace {

struct Monomials {
  std::vector<std::pair<int, int>> powers;  // (a, b): x^a y^b
  explicit Monomials(int degree) {
    for (int d = 0; d <= degree; ++d)
      for (int a = d; a >= 0; --a) powers.emplace_back(a, d - a);
  }
  int size() const { return static_cast<int>(powers.size()); }
  double eval(int j, Vec2 p) const {
    const auto [a, b] = powers[j];
    return std::pow(p.x, a) * std::pow(p.y, b);
  }
  Vec2 grad(int j, Vec2 p) const {
    const auto [a, b] = powers[j];
    return {a == 0 ? 0.0 : a * std::pow(p.x, a - 1) * std::pow(p.y, b),
            b == 0 ? 0.0 : b * std::pow(p.x, a) * std::pow(p.y, b - 1)};
  }
};

const Vec2 kVertex[3] = {{0, 0}, {1, 0}, {0, 1}};

// Edge i sits opposite vertex i; CCW traversal start/end and outward normal.
struct RefEdge {
  Vec2 start, end, normal;
  double length;
};

RefEdge ref_edge(int i) {
  const Vec2 a = kVertex[(i + 1) % 3], b = kVertex[(i + 2) % 3];
  const Vec2 t = (b - a) / norm(b - a);
  return {a, b, {t.y, -t.x}, norm(b - a)};
}

double condition_number(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  return s(0) / s(s.size() - 1);
}

ReferenceElement build_nodal(Family family, int degree) {
  ReferenceElement el;
  el.family = family;
  el.degree = degree;
  el.vector_valued = false;

  std::vector<Vec2> nodes;
  const bool continuous = family == Family::Lagrange;
  if (degree == 0) {
    nodes.push_back({1.0 / 3.0, 1.0 / 3.0});
    el.dofs.push_back({2, 0, 0});
  } else {
    for (int v = 0; v < 3; ++v) {
      nodes.push_back(kVertex[v]);
      el.dofs.push_back({continuous ? 0 : 2, v, 0});
    }
    for (int e = 0; e < 3; ++e) {
      const RefEdge edge = ref_edge(e);
      for (int m = 1; m < degree; ++m) {
        const double t = static_cast<double>(m) / degree;
        nodes.push_back(edge.start + t * (edge.end - edge.start));
        el.dofs.push_back({continuous ? 1 : 2, e, m - 1});
      }
    }
    int t = 0;
    for (int a = 1; a < degree; ++a)
      for (int b = 1; a + b < degree; ++b)
        nodes.push_back({static_cast<double>(a) / degree, static_cast<double>(b) / degree}),
            el.dofs.push_back({2, 0, t++});
  }
  el.dof_count = static_cast<int>(nodes.size());

  const Monomials mono(degree);
  Eigen::MatrixXd v(el.dof_count, mono.size());
  for (int l = 0; l < el.dof_count; ++l)
    for (int j = 0; j < mono.size(); ++j) v(l, j) = mono.eval(j, nodes[l]);
  el.vandermonde_cond = condition_number(v);
  el.coef = v.transpose().fullPivLu().inverse();
  return el;
}

ReferenceElement build_bdm(int degree) {
  ReferenceElement el;
  el.family = Family::BDM;
  el.degree = degree;
  el.vector_valued = true;

  const Monomials mono(degree);
  const int nm = mono.size();
  const int ndof = 2 * nm;
  el.dof_count = ndof;

  std::vector<double> gp, gw;
  gauss_legendre(2 * degree + 2, gp, gw);
  const QuadratureRule cell_rule = quadrature_rule(2 * degree + 2);

  Eigen::MatrixXd fun = Eigen::MatrixXd::Zero(ndof, ndof);
  int row = 0;
  for (int e = 0; e < 3; ++e) {
    const RefEdge edge = ref_edge(e);
    for (int j = 0; j <= degree; ++j, ++row) {
      el.dofs.push_back({1, e, j});
      for (std::size_t q = 0; q < gp.size(); ++q) {
        const Vec2 p = edge.start + gp[q] * (edge.end - edge.start);
        const double w = gw[q] * edge.length * edge_moment_function(j, gp[q]);
        for (int k = 0; k < nm; ++k) {
          const double m = mono.eval(k, p);
          fun(row, k) += w * m * edge.normal.x;
          fun(row, nm + k) += w * m * edge.normal.y;
        }
      }
    }
  }
  // interior moments against (1,0), (0,1), (-y,x); unisolvent with the
  // edge moments for degree 2
  const int n_interior = ndof - row;
  for (int t = 0; t < n_interior; ++t) el.dofs.push_back({2, 0, t});
  for (std::size_t q = 0; q < cell_rule.points.size(); ++q) {
    const Vec2 p = cell_rule.points[q];
    const double w = cell_rule.weights[q];
    const Vec2 dir[3] = {{1, 0}, {0, 1}, {-p.y, p.x}};
    for (int t = 0; t < n_interior; ++t)
      for (int k = 0; k < nm; ++k) {
        const double m = mono.eval(k, p);
        fun(row + t, k) += w * m * dir[t].x;
        fun(row + t, nm + k) += w * m * dir[t].y;
      }
  }

  el.vandermonde_cond = condition_number(fun);
  el.coef = fun.transpose().fullPivLu().inverse();
  return el;
}

}  // namespace

double edge_moment_function(int j, double s) {
  switch (j) {
    case 0: return 1.0;
    case 1: return std::sqrt(3.0) * (2.0 * s - 1.0);
    case 2: return std::sqrt(5.0) * (6.0 * s * s - 6.0 * s + 1.0);
    default: throw std::invalid_argument("edge moment degree > 2 not supported");
  }
}

void ReferenceElement::tabulate(const std::vector<Vec2>& pts,
                                std::vector<std::vector<double>>& val,
                                std::vector<std::vector<Vec2>>& grad) const {
  if (vector_valued) throw std::logic_error("tabulate called on a vector element");
  const Monomials mono(degree);
  val.assign(pts.size(), std::vector<double>(dof_count));
  grad.assign(pts.size(), std::vector<Vec2>(dof_count));
  for (std::size_t q = 0; q < pts.size(); ++q)
    for (int i = 0; i < dof_count; ++i) {
      double v = 0;
      Vec2 g;
      for (int j = 0; j < mono.size(); ++j) {
        v += coef(i, j) * mono.eval(j, pts[q]);
        g += coef(i, j) * mono.grad(j, pts[q]);
      }
      val[q][i] = v;
      grad[q][i] = g;
    }
}

void ReferenceElement::tabulate_vector(const std::vector<Vec2>& pts,
                                       std::vector<std::vector<Vec2>>& val,
                                       std::vector<std::vector<double>>& div) const {
  if (!vector_valued) throw std::logic_error("tabulate_vector called on a scalar element");
  const Monomials mono(degree);
  const int nm = mono.size();
  val.assign(pts.size(), std::vector<Vec2>(dof_count));
  div.assign(pts.size(), std::vector<double>(dof_count));
  for (std::size_t q = 0; q < pts.size(); ++q)
    for (int i = 0; i < dof_count; ++i) {
      Vec2 v;
      double d = 0;
      for (int j = 0; j < nm; ++j) {
        const double m = mono.eval(j, pts[q]);
        const Vec2 g = mono.grad(j, pts[q]);
        v.x += coef(i, j) * m;
        v.y += coef(i, nm + j) * m;
        d += coef(i, j) * g.x + coef(i, nm + j) * g.y;
      }
      val[q][i] = v;
      div[q][i] = d;
    }
}

ReferenceElement build_reference(Family family, int degree) {
  switch (family) {
    case Family::Lagrange:
      if (degree < 1 || degree > 3) throw std::invalid_argument("Lagrange degree must be 1..3");
      return build_nodal(family, degree);
    case Family::DiscontinuousLagrange:
      if (degree < 0 || degree > 1)
        throw std::invalid_argument("DiscontinuousLagrange degree must be 0..1");
      return build_nodal(family, degree);
    case Family::BDM:
      if (degree < 1 || degree > 2) throw std::invalid_argument("BDM degree must be 1..2");
      return build_bdm(degree);
  }
  throw std::invalid_argument("unknown element family");
}

}  // namespace swe
