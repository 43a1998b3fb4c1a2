#pragma once

#include <array>
#include <string>
#include <vector>

#include "swe/vec2.hpp"

namespace swe {

// Planar triangulation with globally oriented edges. Geometric points are
// kept separate from topological vertices so that periodic identifications
// (torus, channel) do not destroy per-cell coordinates: a cell references
// geometric points, and point_id maps each point to its topological vertex.
// For non-periodic meshes the two coincide.
struct Mesh {
  struct Edge {
    int a = -1, b = -1;        // topological endpoints, in the edge's direction
    Vec2 dir;                  // unit vector along the edge's direction
    double length = 0.0;
    bool boundary = false;
    Vec2 normal;               // outward unit normal (boundary edges only)
    std::array<int, 2> cells{-1, -1};
    std::array<int, 2> local_edge{-1, -1};
  };

  std::vector<Vec2> points;                        // geometric coordinates
  std::vector<int> point_id;                       // geometric -> topological vertex
  int n_vertices = 0;                              // topological vertex count
  std::vector<std::array<int, 3>> cells;           // geometric point indices, CCW
  std::vector<Edge> edges;
  std::vector<std::array<int, 3>> cell_edges;      // local edge i sits opposite local vertex i
  std::vector<std::array<int, 3>> cell_edge_sign;  // +1 if CCW traversal matches edge dir
  std::vector<int> boundary_edges;
  std::vector<char> boundary_vertex;               // per topological vertex
  bool periodic = false;

  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  int euler_characteristic() const { return n_vertices - n_edges() + n_cells(); }

  Vec2 point(int cell, int local) const { return points[cells[cell][local]]; }
  double cell_area(int cell) const;
  // Geometric endpoints of a local edge in CCW traversal order.
  std::pair<Vec2, Vec2> local_edge_points(int cell, int local) const;
};

Mesh build_periodic_rectangle(int nx, int ny, double lx, double ly,
                              bool periodic_x, bool periodic_y);
Mesh build_disk(int refinement);

struct MeshReport {
  bool pass = true;
  int euler_characteristic = 0;
  std::vector<std::string> failures;
};

MeshReport validate(const Mesh& mesh);

// ASCII "swemesh 1" format; periodic meshes cannot be serialized.
void save_mesh(const Mesh& mesh, const std::string& path);
Mesh load_mesh(const std::string& path);

// Assembles edge connectivity for a non-periodic triangulation given points
// and cells (used by build_disk and load_mesh).
Mesh finalize_triangulation(std::vector<Vec2> points,
                            std::vector<std::array<int, 3>> cells);

}  // namespace swe
