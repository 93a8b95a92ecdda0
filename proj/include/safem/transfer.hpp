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

#include <utility>
#include <vector>

#include "safem/fe_space.hpp"

namespace safem {

// Row i holds the coarse dofs and weights that interpolate fine dof i.
// Since refinement is nested and the degree is unchanged, prolongation is
// the exact embedding: the prolonged coefficient vector represents the
// same function. A fine dof whose support point coincides with a coarse
// dof (an integer lattice test, no floating point) gets a single entry
// with weight exactly 1.
struct Prolongation {
  std::vector<std::vector<std::pair<int, double>>> rows;
};

// The fine space must live on a mesh obtained from the coarse one by
// refine() calls and have the same degree; anything else throws
// std::invalid_argument.
Prolongation build_prolongation(const FeSpace& coarse, const FeSpace& fine);

// u_coarse must be conforming (constraints applied); the result then
// represents the identical function on the fine mesh.
std::vector<double> prolong(const Prolongation& p,
                            const std::vector<double>& u_coarse);

}  // namespace safem
