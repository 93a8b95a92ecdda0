/* ---------------------------------------------------------------------
 *
 * Copyright (c) 2026 the safem authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * --------------------------------------------------------------------- */

#include "safem/vtk_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

namespace safem {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// Compact renumbering of the vertices referenced by active cells,
// ascending in mesh vertex id.
struct CompactVertices {
  std::vector<int> used;              // mesh vertex ids, ascending
  std::vector<int> index_of;          // mesh vertex id -> compact index
};

CompactVertices compact_vertices(const Mesh& mesh) {
  CompactVertices cv;
  std::set<int> used;
  for (int id : mesh.active_cell_ids())
    for (int v : mesh.cell(id).vertex_ids) used.insert(v);
  cv.used.assign(used.begin(), used.end());
  cv.index_of.assign(mesh.n_vertices(), -1);
  for (std::size_t k = 0; k < cv.used.size(); ++k)
    cv.index_of[cv.used[k]] = static_cast<int>(k);
  return cv;
}

void write_grid(std::ofstream& out, const Mesh& mesh,
                const CompactVertices& cv) {
  out << "# vtk DataFile Version 3.0\n";
  out << "safem output\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << cv.used.size() << " double\n";
  for (int v : cv.used) {
    const Point p = mesh.vertex_position(v);
    out << num(p.x) << ' ' << num(p.y) << " 0\n";
  }
  const int n_cells = mesh.n_active_cells();
  out << "CELLS " << n_cells << ' ' << 5 * n_cells << "\n";
  for (int id : mesh.active_cell_ids()) {
    const auto& v = mesh.cell(id).vertex_ids;
    out << "4 " << cv.index_of[v[0]] << ' ' << cv.index_of[v[1]] << ' '
        << cv.index_of[v[2]] << ' ' << cv.index_of[v[3]] << "\n";
  }
  out << "CELL_TYPES " << n_cells << "\n";
  for (int i = 0; i < n_cells; ++i) out << "9\n";
}

}  // namespace

void write_vtk(const std::string& path, const FeSpace& space,
               const std::vector<double>& u, const EstimatorResult* estimator,
               const std::vector<int>* marked) {
  const Mesh& mesh = space.mesh();
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  const CompactVertices cv = compact_vertices(mesh);
  write_grid(out, mesh, cv);

  out << "POINT_DATA " << cv.used.size() << "\n";
  out << "SCALARS solution double 1\n";
  out << "LOOKUP_TABLE default\n";
  const int d = space.degree();
  for (int v : cv.used) {
    const Vertex& vert = mesh.vertex(v);
    // Every vertex of an active cell carries a dof: corner support points
    // exist at all degrees.
    const int dof = space.find_dof(vert.ix * d, vert.iy * d);
    if (dof < 0) throw std::logic_error("write_vtk: vertex without a dof");
    out << num(u[dof]) << "\n";
  }

  if (estimator || marked) {
    out << "CELL_DATA " << mesh.n_active_cells() << "\n";
    if (estimator) {
      out << "SCALARS eta double 1\n";
      out << "LOOKUP_TABLE default\n";
      for (int id : mesh.active_cell_ids()) {
        const auto it = estimator->per_cell.find(id);
        out << num(it == estimator->per_cell.end() ? 0.0 : it->second) << "\n";
      }
    }
    if (marked) {
      std::set<int> m(marked->begin(), marked->end());
      out << "SCALARS marked int 1\n";
      out << "LOOKUP_TABLE default\n";
      for (int id : mesh.active_cell_ids()) out << (m.count(id) ? 1 : 0) << "\n";
    }
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

void write_mesh_vtk(const std::string& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  write_grid(out, mesh, compact_vertices(mesh));
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace safem
