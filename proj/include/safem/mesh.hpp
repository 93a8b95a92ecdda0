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

#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <unordered_map>
#include <vector>

namespace safem {

struct Point {
  double x = 0;
  double y = 0;
};

// All mesh geometry lives on an integer lattice: each root cell spans
// 2^kLatticeBits lattice units per side. Splitting a cell halves its span,
// so vertex coordinates, midpoints and the point-location predicates are
// exact integer arithmetic; floating point only enters when converting to
// physical coordinates. 20 bits allow 19 refinement levels below the roots.
inline constexpr int kLatticeBits = 20;
inline constexpr std::int64_t kRootSpan = std::int64_t(1) << kLatticeBits;

struct Vertex {
  std::int64_t ix = 0;
  std::int64_t iy = 0;
};

// Child order is SW, SE, NW, NE. Vertex order is counterclockwise starting
// at the SW corner: SW, SE, NE, NW.
struct Cell {
  std::array<int, 4> vertex_ids{-1, -1, -1, -1};
  std::int64_t x0 = 0;
  std::int64_t y0 = 0;
  std::int64_t span = 0;
  int level = 0;
  int parent = -1;
  std::array<int, 4> children{-1, -1, -1, -1};
  bool active = true;
};

// Oriented mesh edge. On a nonconforming interface the edge is the short
// side of the finer cell, so h is always the extent of the finer adjacent
// cell. cell_a < cell_b; the normal points from cell_a to cell_b, outward
// on the boundary.
struct Edge {
  std::array<int, 2> vertex_ids{-1, -1};
  int cell_a = -1;
  int cell_b = -1;
  Point normal;
  double h = 0;
  bool boundary = false;
};

// Quadtree mesh of axis-aligned squares over a set of unit root cells.
// Instances are immutable; refine() returns a new mesh that keeps all cell
// ids of the old one (parents become inactive, children are appended), so
// cell ids are stable across a refinement hierarchy.
//
// The mesh maintained here is one-irregular: active cells sharing a part of
// an edge differ by at most one level. refine() restores that invariant by
// closure splits.
class Mesh {
 public:
  static Mesh unit_square(int subdivisions);
  // nx by ny unit cells covering [0,nx] x [0,ny]; used by tests that need
  // non-square domains.
  static Mesh rectangle_grid(int nx, int ny);
  // Three unit cells covering (-1,1)^2 minus the open upper-right quadrant.
  static Mesh lshape();

  int n_cells() const { return static_cast<int>(cells_.size()); }
  int n_active_cells() const { return static_cast<int>(active_.size()); }
  int n_vertices() const { return static_cast<int>(vertices_.size()); }
  const std::vector<int>& active_cell_ids() const { return active_; }
  const Cell& cell(int id) const { return cells_[id]; }
  const Vertex& vertex(int id) const { return vertices_[id]; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::vector<Edge> interior_edges() const;

  Point position(std::int64_t ix, std::int64_t iy) const;
  Point vertex_position(int vertex_id) const;
  Point cell_origin(const Cell& c) const;
  double cell_extent(const Cell& c) const;
  double lattice_scale() const { return scale_; }

  int max_active_level() const;
  double total_area() const;

  // Active cell containing p, -1 if p lies outside the domain. Points on
  // interfaces resolve to one of the adjacent cells.
  int locate(Point p) const;

  // The active cells across one side of an active cell. Sides are numbered
  // 0=west, 1=east, 2=south, 3=north. Returns {n,n} for a single neighbor
  // that is as coarse or coarser, {a,b} (a != b, ordered along the side)
  // for two finer neighbors, {-1,-1} on the domain boundary.
  std::array<int, 2> side_neighbors(int cell_id, int side) const;

  // Splits the given active cells 1->4 plus whatever closure splits are
  // needed to keep the mesh one-irregular. Throws std::invalid_argument on
  // ids that are out of range or inactive.
  Mesh refine(const std::vector<int>& marked_cells) const;

 private:
  static Mesh grid(int nx, int ny, const std::vector<std::array<int, 2>>& roots,
                   double root_size, Point offset);

  int find_or_create_vertex(std::int64_t ix, std::int64_t iy);
  // Point location in half-unit lattice coordinates (hx/2, hy/2). Probe
  // points are built with odd components so they never sit on a grid line.
  int locate_half(std::int64_t hx, std::int64_t hy) const;
  void split(int cell_id, std::deque<int>& work);
  void rebuild_active();
  void build_edges();
  void push_edge(const Cell& c, int side, int self_id, int other_id);

  std::vector<Vertex> vertices_;
  std::vector<Cell> cells_;
  std::vector<Edge> edges_;
  std::vector<int> active_;
  std::unordered_map<std::uint64_t, int> vertex_lookup_;
  // Root layout: root_ids_[ry * root_nx_ + rx] is the cell id of root
  // (rx, ry) or -1 where the domain has a hole (L-shape).
  std::vector<int> root_ids_;
  int root_nx_ = 0;
  int root_ny_ = 0;
  double scale_ = 1.0;
  Point offset_;
};

}  // namespace safem
