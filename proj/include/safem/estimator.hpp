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

#include <map>
#include <vector>

#include "safem/fe_space.hpp"
#include "safem/parallel.hpp"
#include "safem/quadrature.hpp"

namespace safem {

// Edge-jump error indicator. Every interior edge E contributes
//   J_E^2 = h_E * || [du/dn] ||_{L2(E)}^2,
// boundary edges contribute nothing, and a cell collects the contributions
// of its edges: eta_T^2 = sum over the edges of T of J_E^2. Each interior
// edge has exactly two adjacent active cells, so
//   J^2 = sum_E J_E^2 = 1/2 sum_T eta_T^2
// holds exactly by construction.
struct EstimatorResult {
  // Indexed by active cell id.
  std::map<int, double> per_cell;
  double global_J = 0;
};

// u need not satisfy the constraints: the indicator is computed from the
// conforming interpolation (constraints applied to a copy), so constrained
// entries of u cannot influence the result. The per-edge quadrature with n
// points is exact for the integrand as soon as 2n-1 >= 2*degree.
EstimatorResult jump_estimator(const FeSpace& space,
                               const ConstraintSet& constraints,
                               const std::vector<double>& u,
                               const QuadratureRule1D& edge_quad,
                               Execution exec = Execution::Parallel);

}  // namespace safem
