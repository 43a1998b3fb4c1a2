#include "swe/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

namespace swe {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double rel_err(double v, double v0) {
  const double scale = std::abs(v0) > 0 ? std::abs(v0) : 1.0;
  return (v - v0) / scale;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  return out;
}

}  // namespace

void write_csv(const std::vector<RunRecord>& series, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "step,time,energy,enstrophy,total_pv,mass,rel_energy_err,rel_enstrophy_err,"
         "newton_iters\n";
  if (series.empty()) return;
  const ConservedSet& base = series.front().conserved;
  for (const RunRecord& r : series) {
    out << r.step << ',' << fmt(r.time) << ',' << fmt(r.conserved.energy) << ','
        << fmt(r.conserved.enstrophy) << ',' << fmt(r.conserved.total_pv) << ','
        << fmt(r.conserved.mass) << ',' << fmt(rel_err(r.conserved.energy, base.energy))
        << ',' << fmt(rel_err(r.conserved.enstrophy, base.enstrophy)) << ','
        << r.iterations << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

void write_vtk(const ShallowWater& sw, const State& state, const std::string& path) {
  const Mesh& mesh = *sw.mesh;
  const Field q = sw.q_of(state);

  const int np = static_cast<int>(mesh.points.size());
  std::vector<double> qv(np, 0.0);
  std::vector<Vec2> uv(np, Vec2{0, 0});
  std::vector<int> hits(np, 0);

  const std::vector<Vec2> corners = {{0, 0}, {1, 0}, {0, 1}};
  std::vector<double> qc;
  std::vector<Vec2> uc;
  const std::vector<Vec2> centroid = {{1.0 / 3, 1.0 / 3}};
  std::vector<double> dc;

  std::ofstream out = open_out(path);
  out << "# vtk DataFile Version 3.0\n";
  out << "shallow water state t=" << fmt(state.t) << "\n";
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";

  out << "POINTS " << np << " double\n";
  for (const Vec2& p : mesh.points) out << fmt(p.x) << ' ' << fmt(p.y) << " 0\n";

  const int nc = mesh.n_cells();
  out << "CELLS " << nc << ' ' << 4 * nc << '\n';
  for (const auto& c : mesh.cells) out << "3 " << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  out << "CELL_TYPES " << nc << '\n';
  for (int c = 0; c < nc; ++c) out << "5\n";

  for (int c = 0; c < nc; ++c) {
    evaluate_scalar(q, c, corners, qc);
    evaluate_vector(state.u, c, corners, uc);
    for (int i = 0; i < 3; ++i) {
      const int p = mesh.cells[c][i];
      qv[p] += qc[i];
      uv[p] = uv[p] + uc[i];
      ++hits[p];
    }
  }
  for (int p = 0; p < np; ++p) {
    if (hits[p] == 0) continue;
    qv[p] /= hits[p];
    uv[p] = (1.0 / hits[p]) * uv[p];
  }

  out << "POINT_DATA " << np << '\n';
  out << "SCALARS q double 1\nLOOKUP_TABLE default\n";
  for (int p = 0; p < np; ++p) out << fmt(qv[p]) << '\n';
  out << "VECTORS u double\n";
  for (int p = 0; p < np; ++p) out << fmt(uv[p].x) << ' ' << fmt(uv[p].y) << " 0\n";

  out << "CELL_DATA " << nc << '\n';
  out << "SCALARS D double 1\nLOOKUP_TABLE default\n";
  for (int c = 0; c < nc; ++c) {
    evaluate_scalar(state.D, c, centroid, dc);
    out << fmt(dc[0]) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace swe
