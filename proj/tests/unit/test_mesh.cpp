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

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <doctest.h>

#include "safem/mesh.hpp"

#include "test_util.hpp"

using namespace safem;

namespace {

// Every active cell pair meeting along an edge differs by at most one
// level, and side_neighbors agrees with the edge list.
void check_one_irregular(const Mesh& m) {
  for (const Edge& e : m.edges()) {
    REQUIRE(m.cell(e.cell_a).active);
    if (e.boundary) {
      CHECK(e.cell_b == -1);
      continue;
    }
    REQUIRE(m.cell(e.cell_b).active);
    CHECK(e.cell_a < e.cell_b);
    CHECK(std::abs(m.cell(e.cell_a).level - m.cell(e.cell_b).level) <= 1);
  }
  for (int id : m.active_cell_ids()) {
    const Cell& c = m.cell(id);
    for (int side = 0; side < 4; ++side) {
      const auto [n1, n2] = m.side_neighbors(id, side);
      if (n1 < 0) {
        CHECK(n2 < 0);
        continue;
      }
      CHECK(m.cell(n1).active);
      CHECK(m.cell(n2).active);
      if (n1 == n2) {
        CHECK(m.cell(n1).level >= c.level - 1);
        CHECK(m.cell(n1).level <= c.level);
      } else {
        CHECK(m.cell(n1).level == c.level + 1);
        CHECK(m.cell(n2).level == c.level + 1);
      }
    }
  }
}

// The edge list together with the vertices and active cells forms a planar
// graph whose faces are the active cells plus the outer face, so Euler's
// formula reads V - E + n_active = 1 on our simply connected domains.
void check_euler(const Mesh& m) {
  CHECK(m.n_vertices() - static_cast<int>(m.edges().size()) +
            m.n_active_cells() ==
        1);
}

void check_edge_geometry(const Mesh& m) {
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : m.edges()) {
    const Point a = m.vertex_position(e.vertex_ids[0]);
    const Point b = m.vertex_position(e.vertex_ids[1]);
    const double dx = b.x - a.x, dy = b.y - a.y;
    // axis aligned, length h, normal is the perpendicular unit vector
    CHECK(std::abs(dx) + std::abs(dy) == doctest::Approx(e.h).epsilon(1e-14));
    CHECK(dx * e.normal.x + dy * e.normal.y == doctest::Approx(0.0));
    CHECK(e.normal.x * e.normal.x + e.normal.y * e.normal.y ==
          doctest::Approx(1.0));
    // h is the extent of the finer adjacent cell
    double expected_h = m.cell_extent(m.cell(e.cell_a));
    if (!e.boundary)
      expected_h = std::min(expected_h, m.cell_extent(m.cell(e.cell_b)));
    CHECK(e.h == doctest::Approx(expected_h).epsilon(1e-14));
    // normal points from cell_a to cell_b (outside the domain if boundary)
    const Point mid{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
    const double off = 0.25 * e.h;
    const int fwd = m.locate({mid.x + off * e.normal.x, mid.y + off * e.normal.y});
    const int bwd = m.locate({mid.x - off * e.normal.x, mid.y - off * e.normal.y});
    CHECK(bwd == e.cell_a);
    CHECK(fwd == e.cell_b);
    const bool inserted =
        seen.insert({std::min(e.vertex_ids[0], e.vertex_ids[1]),
                     std::max(e.vertex_ids[0], e.vertex_ids[1])})
            .second;
    CHECK(inserted);
  }
}

double boundary_length(const Mesh& m) {
  double s = 0;
  for (const Edge& e : m.edges())
    if (e.boundary) s += e.h;
  return s;
}

}  // namespace

TEST_CASE("two by two unit square: counts, extents, interior edges") {
  const Mesh m = Mesh::unit_square(2);
  CHECK(m.n_cells() == 4);
  CHECK(m.n_active_cells() == 4);
  CHECK(m.n_vertices() == 9);
  CHECK(m.edges().size() == 12);
  const auto interior = m.interior_edges();
  REQUIRE(interior.size() == 4);
  std::set<std::pair<int, int>> pairs;
  for (const Edge& e : interior) {
    CHECK(e.h == 0.5);
    CHECK(!e.boundary);
    pairs.insert({e.cell_a, e.cell_b});
  }
  CHECK(pairs == std::set<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  for (int id : m.active_cell_ids())
    CHECK(m.cell_extent(m.cell(id)) == 0.5);
  CHECK(m.total_area() == 1.0);
  CHECK(boundary_length(m) == doctest::Approx(4.0));
  check_euler(m);
  check_one_irregular(m);
  check_edge_geometry(m);
}

TEST_CASE("l-shaped domain: three cells, reentrant corner") {
  const Mesh m = Mesh::lshape();
  CHECK(m.n_active_cells() == 3);
  CHECK(m.n_vertices() == 8);
  CHECK(m.edges().size() == 10);
  CHECK(m.interior_edges().size() == 2);
  CHECK(m.total_area() == doctest::Approx(3.0));
  CHECK(boundary_length(m) == doctest::Approx(8.0));
  check_euler(m);
  check_edge_geometry(m);
  // the removed quadrant is outside the domain
  CHECK(m.locate({0.5, 0.5}) == -1);
  CHECK(m.locate({-0.5, -0.5}) == 0);
  CHECK(m.locate({0.5, -0.5}) == 1);
  CHECK(m.locate({-0.5, 0.5}) == 2);
}

TEST_CASE("locate: interior, interface and outside points") {
  const Mesh m = Mesh::unit_square(2);
  CHECK(m.locate({0.1, 0.1}) == 0);
  CHECK(m.locate({0.9, 0.1}) == 1);
  CHECK(m.locate({0.1, 0.9}) == 2);
  CHECK(m.locate({0.9, 0.9}) == 3);
  CHECK(m.locate({-0.1, 0.5}) == -1);
  CHECK(m.locate({0.5, 1.2}) == -1);
  const int center = m.locate({0.5, 0.5});
  CHECK(center >= 0);
  const int on_face = m.locate({0.5, 0.25});
  CHECK((on_face == 0 || on_face == 1));
  // domain corners resolve to the adjacent cell
  CHECK(m.locate({0.0, 0.0}) == 0);
  CHECK(m.locate({1.0, 1.0}) == 3);
}

TEST_CASE("vertex positions are exact for power of two grids") {
  const Mesh m = Mesh::unit_square(2);
  const Cell& c0 = m.cell(0);
  CHECK(m.vertex_position(c0.vertex_ids[0]).x == 0.0);
  CHECK(m.vertex_position(c0.vertex_ids[0]).y == 0.0);
  CHECK(m.vertex_position(c0.vertex_ids[2]).x == 0.5);
  CHECK(m.vertex_position(c0.vertex_ids[2]).y == 0.5);
  const Cell& c3 = m.cell(3);
  CHECK(m.vertex_position(c3.vertex_ids[2]).x == 1.0);
  CHECK(m.vertex_position(c3.vertex_ids[2]).y == 1.0);
}

TEST_CASE("side_neighbors on the uniform grid") {
  const Mesh m = Mesh::unit_square(2);
  CHECK(m.side_neighbors(0, 0) == std::array<int, 2>{-1, -1});
  CHECK(m.side_neighbors(0, 1) == std::array<int, 2>{1, 1});
  CHECK(m.side_neighbors(0, 2) == std::array<int, 2>{-1, -1});
  CHECK(m.side_neighbors(0, 3) == std::array<int, 2>{2, 2});
  CHECK(m.side_neighbors(3, 0) == std::array<int, 2>{2, 2});
  CHECK(m.side_neighbors(3, 2) == std::array<int, 2>{1, 1});
}

TEST_CASE("single refinement: stable ids, new cells appended") {
  const Mesh m = Mesh::unit_square(2);
  const Mesh r = m.refine({0});
  CHECK(r.n_cells() == 8);
  CHECK(r.n_active_cells() == 7);
  CHECK(r.n_vertices() == 14);
  CHECK(r.edges().size() == 20);
  CHECK(!r.cell(0).active);
  CHECK(r.cell(0).children == std::array<int, 4>{4, 5, 6, 7});
  for (int id = 1; id < 4; ++id) {
    CHECK(r.cell(id).active);
    CHECK(r.cell(id).x0 == m.cell(id).x0);
    CHECK(r.cell(id).y0 == m.cell(id).y0);
    CHECK(r.cell(id).span == m.cell(id).span);
  }
  for (int id = 4; id < 8; ++id) {
    CHECK(r.cell(id).parent == 0);
    CHECK(r.cell(id).level == 1);
    CHECK(r.cell_extent(r.cell(id)) == 0.25);
  }
  CHECK(r.total_area() == 1.0);
  check_euler(r);
  check_one_irregular(r);
  check_edge_geometry(r);

  // edge censuses by length: the hanging interfaces contribute two short
  // edges each on the finer side
  int interior_short = 0, interior_long = 0, bdy_short = 0, bdy_long = 0;
  for (const Edge& e : r.edges()) {
    if (e.boundary)
      (e.h == 0.25 ? bdy_short : bdy_long) += 1;
    else
      (e.h == 0.25 ? interior_short : interior_long) += 1;
  }
  CHECK(interior_short == 8);
  CHECK(interior_long == 2);
  CHECK(bdy_short == 4);
  CHECK(bdy_long == 6);
}

TEST_CASE("side_neighbors across a hanging interface") {
  const Mesh r = Mesh::unit_square(2).refine({0});
  const int se = r.locate({0.3, 0.1});
  const int ne = r.locate({0.3, 0.3});
  REQUIRE(se >= 4);
  REQUIRE(ne >= 4);
  // two finer neighbors are reported in ascending order along the side
  CHECK(r.side_neighbors(1, 0) == std::array<int, 2>{se, ne});
  CHECK(r.side_neighbors(se, 1) == std::array<int, 2>{1, 1});
  const int sw = r.locate({0.1, 0.1});
  CHECK(r.side_neighbors(sw, 0) == std::array<int, 2>{-1, -1});
}

TEST_CASE("closure keeps the mesh one-irregular") {
  const Mesh r = Mesh::unit_square(2).refine({0});
  const int ne = r.locate({0.3, 0.3});
  // splitting the child that touches two coarse roots forces both of them
  // to split as well
  const Mesh r2 = r.refine({ne});
  CHECK(r2.n_active_cells() == 16);
  CHECK(!r2.cell(1).active);
  CHECK(!r2.cell(2).active);
  CHECK(r2.cell(3).active);
  CHECK(r2.total_area() == 1.0);
  check_euler(r2);
  check_one_irregular(r2);
  check_edge_geometry(r2);
}

TEST_CASE("invalid refinement requests are rejected") {
  const Mesh m = Mesh::unit_square(2);
  CHECK_THROWS_AS(m.refine({-1}), std::invalid_argument);
  CHECK_THROWS_AS(m.refine({4}), std::invalid_argument);
  const Mesh r = m.refine({0});
  CHECK_THROWS_AS(r.refine({0}), std::invalid_argument);
  CHECK_THROWS_AS(Mesh::unit_square(0), std::invalid_argument);
  CHECK_THROWS_AS(Mesh::unit_square(4096), std::invalid_argument);
  CHECK_THROWS_AS(Mesh::rectangle_grid(0, 1), std::invalid_argument);
}

TEST_CASE("lattice depth supports nineteen levels, then refuses") {
  Mesh m = Mesh::unit_square(1);
  for (int k = 0; k < 19; ++k) {
    const int corner = m.locate({1e-9, 1e-9});
    REQUIRE(corner >= 0);
    m = m.refine({corner});
    check_one_irregular(m);
  }
  CHECK(m.max_active_level() == 19);
  CHECK(m.n_active_cells() == 1 + 3 * 19);
  const int corner = m.locate({1e-9, 1e-9});
  CHECK_THROWS_AS(m.refine({corner}), std::runtime_error);
}

TEST_CASE("random refinement keeps all invariants") {
  for (std::uint64_t seed : {11u, 23u, 57u}) {
    const Mesh m = test_util::refined_mesh(3, 4, seed);
    CHECK(m.total_area() == doctest::Approx(1.0).epsilon(1e-12));
    check_euler(m);
    check_one_irregular(m);
    check_edge_geometry(m);
  }
}

TEST_CASE("identical construction sequences give identical meshes") {
  const Mesh a = test_util::refined_mesh(2, 5, 99);
  const Mesh b = test_util::refined_mesh(2, 5, 99);
  REQUIRE(a.n_cells() == b.n_cells());
  REQUIRE(a.n_vertices() == b.n_vertices());
  REQUIRE(a.edges().size() == b.edges().size());
  for (int i = 0; i < a.n_vertices(); ++i) {
    CHECK(a.vertex(i).ix == b.vertex(i).ix);
    CHECK(a.vertex(i).iy == b.vertex(i).iy);
  }
  for (std::size_t i = 0; i < a.edges().size(); ++i) {
    CHECK(a.edges()[i].cell_a == b.edges()[i].cell_a);
    CHECK(a.edges()[i].cell_b == b.edges()[i].cell_b);
    CHECK(a.edges()[i].h == b.edges()[i].h);
  }
}
