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

#include <functional>
#include <vector>

#include "safem/fe_space.hpp"
#include "safem/parallel.hpp"
#include "safem/quadrature.hpp"
#include "safem/sparse_matrix.hpp"

namespace safem {

// Dense local system of one cell: K is (degree+1)^2 x (degree+1)^2 in
// row-major order, F the local load vector. The bilinear form is
//   a(u,v) = (grad u, grad v) + (beta . grad u, v),
// which on a square of extent h reduces to reference-cell quantities with a
// single factor h on the advection term and h^2 on the load.
struct CellMatrices {
  std::vector<double> K;
  std::vector<double> F;
};

CellMatrices local_cell_matrix(const Mesh& mesh, int cell_id, int degree,
                               Point beta,
                               const std::function<double(Point)>& source,
                               const QuadratureRule& quad);

// Local matrices of all active cells in active-cell order. This is the
// embarrassingly parallel half of assembly.
std::vector<CellMatrices> local_matrices(
    const FeSpace& space, Point beta,
    const std::function<double(Point)>& source, const QuadratureRule& quad,
    Execution exec = Execution::Parallel);

struct LinearSystem {
  SparseMatrix A;
  std::vector<double> rhs;
};

// Assembles the condensed system: constraints are eliminated during the
// scatter (contributions of a constrained dof are redistributed to its
// masters, inhomogeneities move to the right hand side) and every
// constrained row is replaced by an identity row with the inhomogeneity on
// the right hand side. The matrix dimension always equals dof_count() and
// for beta = 0 the matrix stays bitwise symmetric.
//
// The scatter runs serially in cell-id order, so the assembled system is
// bitwise reproducible regardless of thread count.
LinearSystem assemble_system(const FeSpace& space,
                             const ConstraintSet& constraints, Point beta,
                             const std::function<double(Point)>& source,
                             const QuadratureRule& quad,
                             Execution exec = Execution::Parallel);

}  // namespace safem
