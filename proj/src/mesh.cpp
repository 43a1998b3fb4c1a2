#include "swe/mesh.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace swe {

double Mesh::cell_area(int cell) const {
  const Vec2 p0 = point(cell, 0), p1 = point(cell, 1), p2 = point(cell, 2);
  return 0.5 * cross(p1 - p0, p2 - p0);
}

std::pair<Vec2, Vec2> Mesh::local_edge_points(int cell, int local) const {
  return {point(cell, (local + 1) % 3), point(cell, (local + 2) % 3)};
}

namespace {

// Everything needed to identify one cell-local edge with its global edge.
struct EdgeSpec {
  std::uint64_t key;
  int a, b;   // topological endpoints in the edge's canonical direction
  Vec2 dir;   // canonical direction (unit)
};

void assemble_edges(Mesh& mesh, const std::vector<std::array<EdgeSpec, 3>>& specs) {
  std::map<std::uint64_t, int> edge_of_key;
  mesh.cell_edges.assign(mesh.cells.size(), {-1, -1, -1});
  mesh.cell_edge_sign.assign(mesh.cells.size(), {0, 0, 0});

  for (int c = 0; c < mesh.n_cells(); ++c) {
    for (int l = 0; l < 3; ++l) {
      const EdgeSpec& s = specs[c][l];
      auto [it, inserted] = edge_of_key.try_emplace(s.key, mesh.n_edges());
      const int e = it->second;
      auto [pu, pv] = mesh.local_edge_points(c, l);
      if (inserted) {
        Mesh::Edge edge;
        edge.a = s.a;
        edge.b = s.b;
        edge.dir = s.dir;
        edge.length = norm(pv - pu);
        mesh.edges.push_back(edge);
      }
      Mesh::Edge& edge = mesh.edges[e];
      const int slot = edge.cells[0] == -1 ? 0 : 1;
      if (slot == 1 && edge.cells[1] != -1)
        throw std::runtime_error("edge shared by more than two cells");
      edge.cells[slot] = c;
      edge.local_edge[slot] = l;
      mesh.cell_edges[c][l] = e;
      mesh.cell_edge_sign[c][l] = dot(pv - pu, s.dir) > 0 ? 1 : -1;
    }
  }

  mesh.boundary_vertex.assign(mesh.n_vertices, 0);
  for (int e = 0; e < mesh.n_edges(); ++e) {
    Mesh::Edge& edge = mesh.edges[e];
    if (edge.cells[1] != -1) continue;
    edge.boundary = true;
    const int c = edge.cells[0], l = edge.local_edge[0];
    auto [pu, pv] = mesh.local_edge_points(c, l);
    const Vec2 t = (pv - pu) / norm(pv - pu);  // CCW traversal tangent
    edge.normal = {t.y, -t.x};                 // outward for CCW cells
    mesh.boundary_edges.push_back(e);
    mesh.boundary_vertex[edge.a] = 1;
    mesh.boundary_vertex[edge.b] = 1;
  }
}

}  // namespace

Mesh finalize_triangulation(std::vector<Vec2> points,
                            std::vector<std::array<int, 3>> cells) {
  Mesh mesh;
  mesh.points = std::move(points);
  mesh.cells = std::move(cells);
  mesh.n_vertices = static_cast<int>(mesh.points.size());
  mesh.point_id.resize(mesh.points.size());
  for (std::size_t i = 0; i < mesh.points.size(); ++i) mesh.point_id[i] = static_cast<int>(i);

  std::vector<std::array<EdgeSpec, 3>> specs(mesh.cells.size());
  const std::uint64_t n = mesh.points.size();
  for (int c = 0; c < mesh.n_cells(); ++c) {
    for (int l = 0; l < 3; ++l) {
      const int u = mesh.cells[c][(l + 1) % 3];
      const int v = mesh.cells[c][(l + 2) % 3];
      const int lo = std::min(u, v), hi = std::max(u, v);
      EdgeSpec s;
      s.key = static_cast<std::uint64_t>(lo) * n + hi;
      s.a = lo;
      s.b = hi;
      s.dir = (mesh.points[hi] - mesh.points[lo]) / norm(mesh.points[hi] - mesh.points[lo]);
      specs[c][l] = s;
    }
  }
  assemble_edges(mesh, specs);
  return mesh;
}

Mesh build_periodic_rectangle(int nx, int ny, double lx, double ly,
                              bool periodic_x, bool periodic_y) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("cell counts must be >= 1");
  if (lx <= 0 || ly <= 0) throw std::invalid_argument("domain lengths must be > 0");

  Mesh mesh;
  mesh.periodic = periodic_x || periodic_y;
  const double dx = lx / nx, dy = ly / ny;
  const int npx = nx + 1, npy = ny + 1;
  const int ntx = periodic_x ? nx : nx + 1;
  const int nty = periodic_y ? ny : ny + 1;

  auto gid = [&](int i, int j) { return j * npx + i; };
  auto tid = [&](int i, int j) {
    const int iw = periodic_x ? i % nx : i;
    const int jw = periodic_y ? j % ny : j;
    return jw * ntx + iw;
  };

  mesh.points.resize(npx * npy);
  mesh.point_id.resize(npx * npy);
  for (int j = 0; j < npy; ++j)
    for (int i = 0; i < npx; ++i) {
      mesh.points[gid(i, j)] = {i * dx, j * dy};
      mesh.point_id[gid(i, j)] = tid(i, j);
    }
  mesh.n_vertices = ntx * nty;

  // Each quad is split by its main diagonal (i,j)-(i+1,j+1).
  std::vector<std::array<EdgeSpec, 3>> specs;
  const Vec2 diag = Vec2{dx, dy} / norm(Vec2{dx, dy});
  // type 0: horizontal from (i,j); 1: vertical from (i,j); 2: diagonal from (i,j)
  auto edge_spec = [&](int type, int i, int j) {
    const int iw = periodic_x ? i % nx : i;
    const int jw = periodic_y ? j % ny : j;
    EdgeSpec s;
    s.key = (static_cast<std::uint64_t>(type) * npy + jw) * npx + iw;
    switch (type) {
      case 0: s.a = tid(iw, jw); s.b = tid(iw + 1, jw); s.dir = {1, 0}; break;
      case 1: s.a = tid(iw, jw); s.b = tid(iw, jw + 1); s.dir = {0, 1}; break;
      default: s.a = tid(iw, jw); s.b = tid(iw + 1, jw + 1); s.dir = diag; break;
    }
    return s;
  };

  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      mesh.cells.push_back({gid(i, j), gid(i + 1, j), gid(i + 1, j + 1)});
      specs.push_back({edge_spec(1, i + 1, j), edge_spec(2, i, j), edge_spec(0, i, j)});
      mesh.cells.push_back({gid(i, j), gid(i + 1, j + 1), gid(i, j + 1)});
      specs.push_back({edge_spec(0, i, j + 1), edge_spec(1, i, j), edge_spec(2, i, j)});
    }

  assemble_edges(mesh, specs);
  return mesh;
}

Mesh build_disk(int refinement) {
  if (refinement < 0) throw std::invalid_argument("refinement must be >= 0");

  std::vector<Vec2> pts = {{0, 0}};
  std::vector<std::array<int, 3>> tris;
  for (int k = 0; k < 6; ++k) {
    const double a = k * M_PI / 3.0;
    pts.push_back({std::cos(a), std::sin(a)});
  }
  for (int k = 0; k < 6; ++k) tris.push_back({0, k + 1, (k + 1) % 6 + 1});

  for (int level = 0; level < refinement; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    std::map<std::pair<int, int>, int> edge_count;
    for (const auto& t : tris)
      for (int l = 0; l < 3; ++l) {
        const int u = std::min(t[l], t[(l + 1) % 3]);
        const int v = std::max(t[l], t[(l + 1) % 3]);
        ++edge_count[{u, v}];
      }
    auto mid = [&](int u, int v) {
      const auto key = std::minmax(u, v);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec2 m = 0.5 * (pts[u] + pts[v]);
      if (edge_count[key] == 1) m = m / norm(m);  // boundary: project to circle
      pts.push_back(m);
      const int id = static_cast<int>(pts.size()) - 1;
      midpoint[key] = id;
      return id;
    };
    std::vector<std::array<int, 3>> next;
    for (const auto& t : tris) {
      const int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    tris = std::move(next);
  }
  return finalize_triangulation(std::move(pts), std::move(tris));
}

MeshReport validate(const Mesh& mesh) {
  MeshReport report;
  report.euler_characteristic = mesh.euler_characteristic();
  auto fail = [&](std::string msg) {
    report.pass = false;
    report.failures.push_back(std::move(msg));
  };

  for (int c = 0; c < mesh.n_cells(); ++c)
    if (mesh.cell_area(c) <= 0)
      fail("cell " + std::to_string(c) + " has non-positive area");

  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Mesh::Edge& edge = mesh.edges[e];
    const int incident = (edge.cells[0] != -1) + (edge.cells[1] != -1);
    if (edge.boundary && incident != 1)
      fail("boundary edge " + std::to_string(e) + " has " + std::to_string(incident) + " cells");
    if (!edge.boundary && incident != 2)
      fail("interior edge " + std::to_string(e) + " has " + std::to_string(incident) + " cells");
    if (edge.boundary && std::abs(norm(edge.normal) - 1.0) > 1e-14)
      fail("boundary edge " + std::to_string(e) + " normal is not unit");
    if (!edge.boundary) {
      const int s0 = mesh.cell_edge_sign[edge.cells[0]][edge.local_edge[0]];
      const int s1 = mesh.cell_edge_sign[edge.cells[1]][edge.local_edge[1]];
      if (s0 + s1 != 0)
        fail("interior edge " + std::to_string(e) + " incidence signs do not cancel");
      // periodic identification must preserve edge lengths
      for (int s = 0; s < 2; ++s) {
        auto [pu, pv] = mesh.local_edge_points(edge.cells[s], edge.local_edge[s]);
        if (std::abs(norm(pv - pu) - edge.length) > 1e-12 * (1.0 + edge.length))
          fail("edge " + std::to_string(e) + " length differs between incidences");
      }
    }
  }

  const int expected_chi = mesh.periodic ? 0 : 1;
  if (report.euler_characteristic != expected_chi)
    fail("Euler characteristic " + std::to_string(report.euler_characteristic) +
         ", expected " + std::to_string(expected_chi));
  return report;
}

void save_mesh(const Mesh& mesh, const std::string& path) {
  if (mesh.periodic)
    throw std::invalid_argument("periodic meshes cannot be serialized to swemesh format");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.precision(17);
  out << "swemesh 1\n";
  out << "V " << mesh.points.size() << "\n";
  for (const Vec2& p : mesh.points) out << p.x << " " << p.y << "\n";
  out << "C " << mesh.cells.size() << "\n";
  for (const auto& c : mesh.cells) out << c[0] << " " << c[1] << " " << c[2] << "\n";
  out << "B " << mesh.boundary_edges.size() << "\n";
  for (int e : mesh.boundary_edges)
    out << mesh.edges[e].a << " " << mesh.edges[e].b << "\n";
  if (!out) throw std::runtime_error("write failure on " + path);
}

Mesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "swemesh" || version != 1)
    throw std::runtime_error(path + ": not a swemesh 1 file");

  auto expect = [&](char tag) {
    std::string s;
    std::size_t n;
    if (!(in >> s >> n) || s != std::string(1, tag))
      throw std::runtime_error(path + ": expected section " + std::string(1, tag));
    return n;
  };

  std::vector<Vec2> pts(expect('V'));
  for (Vec2& p : pts)
    if (!(in >> p.x >> p.y)) throw std::runtime_error(path + ": bad vertex line");
  std::vector<std::array<int, 3>> cells(expect('C'));
  for (auto& c : cells)
    if (!(in >> c[0] >> c[1] >> c[2])) throw std::runtime_error(path + ": bad cell line");
  const std::size_t nb = expect('B');
  std::vector<std::pair<int, int>> bdry(nb);
  for (auto& b : bdry)
    if (!(in >> b.first >> b.second)) throw std::runtime_error(path + ": bad boundary line");

  Mesh mesh = finalize_triangulation(std::move(pts), std::move(cells));
  if (bdry.size() != mesh.boundary_edges.size())
    throw std::runtime_error(path + ": boundary edge count does not match triangulation");
  return mesh;
}

}  // namespace swe
