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

#include "safem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace safem {

namespace {

std::uint64_t vertex_key(std::int64_t ix, std::int64_t iy) {
  // Lattice coordinates stay below 2^32 (at most 2^12 roots of span 2^20).
  return (static_cast<std::uint64_t>(ix) << 32) | static_cast<std::uint64_t>(iy);
}

Point side_outward_normal(int side) {
  switch (side) {
    case 0: return {-1.0, 0.0};
    case 1: return {1.0, 0.0};
    case 2: return {0.0, -1.0};
    default: return {0.0, 1.0};
  }
}

}  // namespace

Point Mesh::position(std::int64_t ix, std::int64_t iy) const {
  return {offset_.x + scale_ * static_cast<double>(ix),
          offset_.y + scale_ * static_cast<double>(iy)};
}

Point Mesh::vertex_position(int vertex_id) const {
  const Vertex& v = vertices_[vertex_id];
  return position(v.ix, v.iy);
}

Point Mesh::cell_origin(const Cell& c) const { return position(c.x0, c.y0); }

double Mesh::cell_extent(const Cell& c) const {
  return scale_ * static_cast<double>(c.span);
}

int Mesh::find_or_create_vertex(std::int64_t ix, std::int64_t iy) {
  auto [it, inserted] =
      vertex_lookup_.try_emplace(vertex_key(ix, iy), n_vertices());
  if (inserted) vertices_.push_back({ix, iy});
  return it->second;
}

Mesh Mesh::grid(int nx, int ny, const std::vector<std::array<int, 2>>& roots,
                double root_size, Point offset) {
  Mesh m;
  m.root_nx_ = nx;
  m.root_ny_ = ny;
  m.scale_ = root_size / static_cast<double>(kRootSpan);
  m.offset_ = offset;
  m.root_ids_.assign(static_cast<std::size_t>(nx) * ny, -1);
  for (const auto& [rx, ry] : roots) {
    const std::int64_t x0 = static_cast<std::int64_t>(rx) * kRootSpan;
    const std::int64_t y0 = static_cast<std::int64_t>(ry) * kRootSpan;
    Cell c;
    c.vertex_ids = {m.find_or_create_vertex(x0, y0),
                    m.find_or_create_vertex(x0 + kRootSpan, y0),
                    m.find_or_create_vertex(x0 + kRootSpan, y0 + kRootSpan),
                    m.find_or_create_vertex(x0, y0 + kRootSpan)};
    c.x0 = x0;
    c.y0 = y0;
    c.span = kRootSpan;
    c.level = 0;
    m.root_ids_[static_cast<std::size_t>(ry) * nx + rx] = m.n_cells();
    m.cells_.push_back(c);
  }
  m.rebuild_active();
  m.build_edges();
  return m;
}

Mesh Mesh::unit_square(int subdivisions) {
  if (subdivisions < 1)
    throw std::invalid_argument("unit_square: subdivisions must be positive");
  if (subdivisions > 2048)
    throw std::invalid_argument("unit_square: subdivision limit is 2048");
  std::vector<std::array<int, 2>> roots;
  for (int ry = 0; ry < subdivisions; ++ry)
    for (int rx = 0; rx < subdivisions; ++rx) roots.push_back({rx, ry});
  return grid(subdivisions, subdivisions, roots, 1.0 / subdivisions, {0.0, 0.0});
}

Mesh Mesh::rectangle_grid(int nx, int ny) {
  if (nx < 1 || ny < 1 || nx > 2048 || ny > 2048)
    throw std::invalid_argument("rectangle_grid: grid extents must be in 1..2048");
  std::vector<std::array<int, 2>> roots;
  for (int ry = 0; ry < ny; ++ry)
    for (int rx = 0; rx < nx; ++rx) roots.push_back({rx, ry});
  return grid(nx, ny, roots, 1.0, {0.0, 0.0});
}

Mesh Mesh::lshape() {
  return grid(2, 2, {{0, 0}, {1, 0}, {0, 1}}, 1.0, {-1.0, -1.0});
}

void Mesh::rebuild_active() {
  active_.clear();
  for (int id = 0; id < n_cells(); ++id)
    if (cells_[id].active) active_.push_back(id);
}

int Mesh::locate_half(std::int64_t hx, std::int64_t hy) const {
  if (hx < 0 || hy < 0) return -1;
  const std::int64_t rx = hx >> (kLatticeBits + 1);
  const std::int64_t ry = hy >> (kLatticeBits + 1);
  if (rx >= root_nx_ || ry >= root_ny_) return -1;
  int id = root_ids_[static_cast<std::size_t>(ry) * root_nx_ + rx];
  if (id < 0) return -1;
  while (!cells_[id].active) {
    const Cell& c = cells_[id];
    const std::int64_t mx = 2 * c.x0 + c.span;
    const std::int64_t my = 2 * c.y0 + c.span;
    const int child = (hy >= my ? 2 : 0) + (hx >= mx ? 1 : 0);
    id = c.children[child];
  }
  return id;
}

int Mesh::locate(Point p) const {
  const double rel_x = (p.x - offset_.x) / (scale_ * kRootSpan);
  const double rel_y = (p.y - offset_.y) / (scale_ * kRootSpan);
  const double pad = 1e-12;
  if (rel_x < -pad || rel_y < -pad || rel_x > root_nx_ + pad ||
      rel_y > root_ny_ + pad)
    return -1;
  auto clamp_index = [](double r, int n) {
    int i = static_cast<int>(std::floor(r));
    return std::min(std::max(i, 0), n - 1);
  };
  const int rx = clamp_index(rel_x, root_nx_);
  const int ry = clamp_index(rel_y, root_ny_);
  int id = root_ids_[static_cast<std::size_t>(ry) * root_nx_ + rx];
  if (id < 0) return -1;
  while (!cells_[id].active) {
    const Cell& c = cells_[id];
    const Point mid = position(c.x0 + c.span / 2, c.y0 + c.span / 2);
    const int child = (p.y >= mid.y ? 2 : 0) + (p.x >= mid.x ? 1 : 0);
    id = cells_[id].children[child];
  }
  // The descent ignored the domain boundary; reject points that are more
  // than a tolerance outside the located cell.
  const Cell& c = cells_[id];
  const Point o = cell_origin(c);
  const double ext = cell_extent(c);
  const double tol = pad * std::max(ext, 1.0);
  if (p.x < o.x - tol || p.x > o.x + ext + tol || p.y < o.y - tol ||
      p.y > o.y + ext + tol)
    return -1;
  return id;
}

std::array<int, 2> Mesh::side_neighbors(int cell_id, int side) const {
  const Cell& c = cells_[cell_id];
  const std::int64_t s = c.span;
  // Probe points a half lattice unit outside the side, at 1/4 and 3/4 of
  // its length; doubled coordinates keep everything integral. A neighbor
  // that is coarser or equal covers the whole side, so both probes find
  // it; two finer neighbors are found one by each probe.
  std::int64_t q1x, q1y, q2x, q2y;
  switch (side) {
    case 0:
      q1x = q2x = 2 * c.x0 - 1;
      q1y = 2 * c.y0 + s / 2;
      q2y = 2 * c.y0 + 3 * (s / 2);
      break;
    case 1:
      q1x = q2x = 2 * (c.x0 + s) + 1;
      q1y = 2 * c.y0 + s / 2;
      q2y = 2 * c.y0 + 3 * (s / 2);
      break;
    case 2:
      q1y = q2y = 2 * c.y0 - 1;
      q1x = 2 * c.x0 + s / 2;
      q2x = 2 * c.x0 + 3 * (s / 2);
      break;
    default:
      q1y = q2y = 2 * (c.y0 + s) + 1;
      q1x = 2 * c.x0 + s / 2;
      q2x = 2 * c.x0 + 3 * (s / 2);
      break;
  }
  return {locate_half(q1x, q1y), locate_half(q2x, q2y)};
}

void Mesh::push_edge(const Cell& c, int side, int self_id, int other_id) {
  Edge e;
  switch (side) {
    case 0: e.vertex_ids = {c.vertex_ids[0], c.vertex_ids[3]}; break;
    case 1: e.vertex_ids = {c.vertex_ids[1], c.vertex_ids[2]}; break;
    case 2: e.vertex_ids = {c.vertex_ids[0], c.vertex_ids[1]}; break;
    default: e.vertex_ids = {c.vertex_ids[3], c.vertex_ids[2]}; break;
  }
  e.h = cell_extent(c);
  const Point outward = side_outward_normal(side);
  if (other_id < 0) {
    e.boundary = true;
    e.cell_a = self_id;
    e.cell_b = -1;
    e.normal = outward;
  } else {
    e.boundary = false;
    e.cell_a = std::min(self_id, other_id);
    e.cell_b = std::max(self_id, other_id);
    e.normal = (e.cell_a == self_id) ? outward : Point{-outward.x, -outward.y};
  }
  edges_.push_back(e);
}

void Mesh::build_edges() {
  edges_.clear();
  for (int id : active_) {
    const Cell& c = cells_[id];
    for (int side = 0; side < 4; ++side) {
      const auto [n1, n2] = side_neighbors(id, side);
      if (n1 < 0) {
        push_edge(c, side, id, -1);
        continue;
      }
      if (n1 != n2) continue;  // two finer neighbors own the sub-edges
      const Cell& n = cells_[n1];
      // A single neighbor cannot be finer when both probes agree.
      if (n.level < c.level || (n.level == c.level && id < n1))
        push_edge(c, side, id, n1);
    }
  }
}

std::vector<Edge> Mesh::interior_edges() const {
  std::vector<Edge> out;
  for (const Edge& e : edges_)
    if (!e.boundary) out.push_back(e);
  return out;
}

int Mesh::max_active_level() const {
  int m = 0;
  for (int id : active_) m = std::max(m, cells_[id].level);
  return m;
}

double Mesh::total_area() const {
  double a = 0;
  for (int id : active_) {
    const double ext = cell_extent(cells_[id]);
    a += ext * ext;
  }
  return a;
}

void Mesh::split(int cell_id, std::deque<int>& work) {
  // Copy the geometry first: push_back below invalidates references.
  const Cell parent = cells_[cell_id];
  const std::int64_t x0 = parent.x0, y0 = parent.y0, s = parent.span;
  // Children must keep span >= 2 so that the half-lattice probes in
  // side_neighbors stay off the grid lines.
  if (s < 4)
    throw std::runtime_error("refine: lattice resolution exhausted");
  const std::int64_t h = s / 2;

  const int vs = find_or_create_vertex(x0 + h, y0);
  const int ve = find_or_create_vertex(x0 + s, y0 + h);
  const int vn = find_or_create_vertex(x0 + h, y0 + s);
  const int vw = find_or_create_vertex(x0, y0 + h);
  const int vc = find_or_create_vertex(x0 + h, y0 + h);

  const auto& pv = parent.vertex_ids;
  const int base = n_cells();
  auto make_child = [&](std::int64_t cx, std::int64_t cy,
                        std::array<int, 4> verts) {
    Cell child;
    child.vertex_ids = verts;
    child.x0 = cx;
    child.y0 = cy;
    child.span = h;
    child.level = parent.level + 1;
    child.parent = cell_id;
    cells_.push_back(child);
  };
  make_child(x0, y0, {pv[0], vs, vc, vw});
  make_child(x0 + h, y0, {vs, pv[1], ve, vc});
  make_child(x0, y0 + h, {vw, vc, vn, pv[3]});
  make_child(x0 + h, y0 + h, {vc, ve, pv[2], vn});

  cells_[cell_id].active = false;
  cells_[cell_id].children = {base, base + 1, base + 2, base + 3};

  // Closure: any active neighbor coarser than the split cell would now
  // differ from the new children by two levels, so it must split as well.
  // A coarser neighbor covers the entire side and is found by one probe.
  for (int side = 0; side < 4; ++side) {
    std::int64_t px, py;
    switch (side) {
      case 0: px = 2 * x0 - 1; py = 2 * y0 + s / 2; break;
      case 1: px = 2 * (x0 + s) + 1; py = 2 * y0 + s / 2; break;
      case 2: py = 2 * y0 - 1; px = 2 * x0 + s / 2; break;
      default: py = 2 * (y0 + s) + 1; px = 2 * x0 + s / 2; break;
    }
    const int n = locate_half(px, py);
    if (n >= 0 && cells_[n].level < parent.level) work.push_back(n);
  }
}

Mesh Mesh::refine(const std::vector<int>& marked_cells) const {
  std::set<int> marked;
  for (int id : marked_cells) {
    if (id < 0 || id >= n_cells())
      throw std::invalid_argument("refine: cell id out of range");
    if (!cells_[id].active)
      throw std::invalid_argument("refine: cell is not active");
    marked.insert(id);
  }
  Mesh out = *this;
  out.edges_.clear();
  std::deque<int> work(marked.begin(), marked.end());
  while (!work.empty()) {
    const int id = work.front();
    work.pop_front();
    if (!out.cells_[id].active) continue;
    out.split(id, work);
  }
  out.rebuild_active();
  out.build_edges();
  return out;
}

}  // namespace safem
