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

#include "safem/estimator.hpp"

#include <cmath>

namespace safem {

EstimatorResult jump_estimator(const FeSpace& space,
                               const ConstraintSet& constraints,
                               const std::vector<double>& u,
                               const QuadratureRule1D& edge_quad,
                               Execution exec) {
  const Mesh& mesh = space.mesh();

  // Work on the conforming interpolation so that whatever the caller left
  // in constrained entries cannot change the indicator.
  std::vector<double> v = u;
  constraints.apply(v);

  std::vector<const Edge*> interior;
  for (const Edge& e : mesh.edges())
    if (!e.boundary) interior.push_back(&e);

  // Phase 1 (parallel): one independent J_E^2 per interior edge.
  std::vector<double> je2(interior.size(), 0.0);
  parallel::for_each_index(static_cast<int>(interior.size()), exec, [&](int k) {
    const Edge& e = *interior[k];
    const Point p0 = mesh.vertex_position(e.vertex_ids[0]);
    const Point p1 = mesh.vertex_position(e.vertex_ids[1]);
    double sum = 0.0;
    for (std::size_t q = 0; q < edge_quad.points.size(); ++q) {
      const double t = edge_quad.points[q];
      const Point p{p0.x + t * (p1.x - p0.x), p0.y + t * (p1.y - p0.y)};
      const Point ga = space.evaluate_in_cell(v, e.cell_a, p).gradient;
      const Point gb = space.evaluate_in_cell(v, e.cell_b, p).gradient;
      const double jump =
          (ga.x - gb.x) * e.normal.x + (ga.y - gb.y) * e.normal.y;
      sum += edge_quad.weights[q] * jump * jump;
    }
    // h * ||jump||^2 = h * (h * sum of weighted squares).
    je2[k] = e.h * e.h * sum;
  });

  // Phase 2 (serial, fixed order): scatter to the two adjacent cells.
  EstimatorResult out;
  for (int id : mesh.active_cell_ids()) out.per_cell[id] = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < interior.size(); ++k) {
    out.per_cell[interior[k]->cell_a] += je2[k];
    out.per_cell[interior[k]->cell_b] += je2[k];
    total += je2[k];
  }
  for (auto& [id, eta2] : out.per_cell) eta2 = std::sqrt(eta2);
  out.global_J = std::sqrt(total);
  return out;
}

}  // namespace safem
