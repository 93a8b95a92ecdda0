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

#include <vector>

#include "safem/mesh.hpp"

namespace safem {

// Gauss-Legendre rule on the reference interval [0,1]. A rule with n points
// integrates polynomials of degree 2n-1 exactly; weights sum to 1.
struct QuadratureRule1D {
  std::vector<double> points;
  std::vector<double> weights;
};

// Tensor-product Gauss-Legendre rule on the reference square [0,1]^2 with
// n^2 points, first coordinate running fastest. Weights sum to 1.
struct QuadratureRule {
  std::vector<Point> points;
  std::vector<double> weights;
  int points_per_direction = 0;
};

// n in [1, 6]; throws std::invalid_argument outside that range.
QuadratureRule1D gauss_rule_1d(int n);
QuadratureRule gauss_rule(int n);

}  // namespace safem
