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

#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "safem/transfer.hpp"

#include "test_util.hpp"

using namespace safem;

namespace {

// The prolonged vector must describe the same function: compare point
// evaluations of coarse and fine representations.
void check_same_function(const FeSpace& coarse, const FeSpace& fine,
                         const std::vector<double>& uc,
                         const std::vector<double>& uf) {
  test_util::Lcg rng(8);
  for (int s = 0; s < 40; ++s) {
    const Point p{rng.uniform(0.01, 0.99), rng.uniform(0.01, 0.99)};
    const double vc = coarse.evaluate(uc, p).value;
    const double vf = fine.evaluate(uf, p).value;
    CHECK(vc == doctest::Approx(vf).epsilon(1e-12));
  }
}

}  // namespace

TEST_CASE("uniform refinement of one bilinear cell") {
  const Mesh coarse_mesh = Mesh::unit_square(1);
  const Mesh fine_mesh = coarse_mesh.refine({0});
  const FeSpace coarse(coarse_mesh, 1);
  const FeSpace fine(fine_mesh, 1);
  const Prolongation p = build_prolongation(coarse, fine);
  REQUIRE(p.rows.size() == static_cast<std::size_t>(fine.dof_count()));

  // the new center dof averages all four coarse corners
  const int center = fine.find_dof(kRootSpan / 2, kRootSpan / 2);
  REQUIRE(center >= 0);
  REQUIRE(p.rows[center].size() == 4);
  for (const auto& [dof, w] : p.rows[center]) CHECK(w == 0.25);

  // an edge midpoint averages the two adjacent corners
  const int south = fine.find_dof(kRootSpan / 2, 0);
  REQUIRE(south >= 0);
  REQUIRE(p.rows[south].size() == 2);
  for (const auto& [dof, w] : p.rows[south]) CHECK(w == 0.5);

  // surviving coarse positions carry weight exactly one
  const int corner = fine.find_dof(0, 0);
  REQUIRE(corner >= 0);
  REQUIRE(p.rows[corner].size() == 1);
  CHECK(p.rows[corner][0].second == 1.0);
}

TEST_CASE("prolongation reproduces the coarse function exactly") {
  for (int d = 1; d <= 3; ++d) {
    const Mesh coarse_mesh = test_util::refined_mesh(2, 2, 13);
    const Mesh fine_mesh =
        coarse_mesh.refine({coarse_mesh.active_cell_ids()[0],
                            coarse_mesh.active_cell_ids()[3]});
    const FeSpace coarse(coarse_mesh, d);
    const FeSpace fine(fine_mesh, d);
    const Prolongation p = build_prolongation(coarse, fine);

    // conforming coarse vector: interpolant of a smooth function
    std::vector<double> uc(coarse.dof_count());
    for (int i = 0; i < coarse.dof_count(); ++i) {
      const Point q = coarse.support_point(i);
      uc[i] = std::sin(2 * q.x) * (1 + q.y);
    }
    const ConstraintSet cc = build_constraints(
        coarse, [](Point q) { return std::sin(2 * q.x) * (1 + q.y); });
    // interpolants are not conforming for degree < infinity; apply fixes
    // the hanging entries so that uc is a member of the coarse space
    std::vector<double> conforming = uc;
    cc.apply(conforming);

    const std::vector<double> uf = prolong(p, conforming);
    check_same_function(coarse, fine, conforming, uf);
  }
}

TEST_CASE("every dof kept under refinement keeps its coefficient") {
  const Mesh coarse_mesh = Mesh::unit_square(2);
  const Mesh fine_mesh = coarse_mesh.refine({1, 2});
  for (int d = 1; d <= 3; ++d) {
    const FeSpace coarse(coarse_mesh, d);
    const FeSpace fine(fine_mesh, d);
    const Prolongation p = build_prolongation(coarse, fine);
    const auto uc = test_util::random_vector(coarse.dof_count(), 500 + d);
    const auto uf = prolong(p, uc);
    int identity_rows = 0;
    for (int i = 0; i < fine.dof_count(); ++i)
      if (p.rows[i].size() == 1 && p.rows[i][0].second == 1.0) {
        ++identity_rows;
        CHECK(uf[i] == uc[p.rows[i][0].first]);
      }
    // at least all dofs of the two untouched cells survive identically
    CHECK(identity_rows >= coarse.dofs_per_cell());
  }
}

TEST_CASE("prolongation rows sum to one") {
  const Mesh coarse_mesh = test_util::refined_mesh(2, 2, 29);
  const Mesh fine_mesh = coarse_mesh.refine({coarse_mesh.active_cell_ids()[2]});
  for (int d = 1; d <= 3; ++d) {
    const FeSpace coarse(coarse_mesh, d);
    const FeSpace fine(fine_mesh, d);
    const Prolongation p = build_prolongation(coarse, fine);
    for (const auto& row : p.rows) {
      REQUIRE(!row.empty());
      double sum = 0;
      for (const auto& [dof, w] : row) {
        CHECK(w != 0.0);
        sum += w;
      }
      // shape values at a point sum to one
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("two refinement steps compose") {
  const Mesh m0 = Mesh::unit_square(2);
  const Mesh m1 = m0.refine({0});
  const Mesh m2 = m1.refine({3, 4});
  const FeSpace s0(m0, 2);
  const FeSpace s1(m1, 2);
  const FeSpace s2(m2, 2);
  const auto u0 = test_util::random_vector(s0.dof_count(), 4242);
  // no hanging constraints on the uniform coarse mesh: u0 is conforming
  const auto direct = prolong(build_prolongation(s0, s2), u0);
  const auto stepped = prolong(build_prolongation(s1, s2),
                               prolong(build_prolongation(s0, s1), u0));
  REQUIRE(direct.size() == stepped.size());
  for (std::size_t i = 0; i < direct.size(); ++i)
    CHECK(direct[i] == doctest::Approx(stepped[i]).epsilon(1e-13));
}

TEST_CASE("mismatched spaces are rejected") {
  const Mesh coarse_mesh = Mesh::unit_square(2);
  const Mesh fine_mesh = coarse_mesh.refine({0});
  const FeSpace coarse1(coarse_mesh, 1);
  const FeSpace fine2(fine_mesh, 2);
  CHECK_THROWS_AS(build_prolongation(coarse1, fine2), std::invalid_argument);

  // different root layout: not a refinement
  const Mesh other = Mesh::rectangle_grid(4, 1);
  const FeSpace other_space(other, 1);
  const FeSpace fine1(fine_mesh, 1);
  CHECK_THROWS_AS(build_prolongation(other_space, fine1), std::invalid_argument);

  // sibling refinements of the same mesh nest in neither direction
  const Mesh sibling = coarse_mesh.refine({1});
  const FeSpace sibling1(sibling, 1);
  CHECK_THROWS_AS(build_prolongation(sibling1, fine1), std::invalid_argument);

  // refinement in the wrong direction
  CHECK_THROWS_AS(build_prolongation(fine1, coarse1), std::invalid_argument);
}
