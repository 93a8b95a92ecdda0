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

#include "safem/assembly.hpp"

#include <algorithm>
#include <stdexcept>

namespace safem {

namespace {

// Shape values and reference gradients at the quadrature points, shared
// read-only by every cell.
struct ShapeTable {
  int n_loc = 0;
  int n_q = 0;
  std::vector<double> val, dxi, deta;  // [q * n_loc + i]
};

ShapeTable build_shape_table(int degree, const QuadratureRule& quad) {
  ShapeTable t;
  const int d = degree;
  t.n_loc = (d + 1) * (d + 1);
  t.n_q = static_cast<int>(quad.points.size());
  t.val.resize(static_cast<std::size_t>(t.n_q) * t.n_loc);
  t.dxi.resize(t.val.size());
  t.deta.resize(t.val.size());
  for (int q = 0; q < t.n_q; ++q) {
    const double xi = quad.points[q].x;
    const double eta = quad.points[q].y;
    double vx[4], vy[4], dx[4], dy[4];
    for (int j = 0; j <= d; ++j) {
      vx[j] = shape_1d(d, j, xi);
      vy[j] = shape_1d(d, j, eta);
      dx[j] = shape_1d_derivative(d, j, xi);
      dy[j] = shape_1d_derivative(d, j, eta);
    }
    int i = 0;
    for (int jy = 0; jy <= d; ++jy)
      for (int jx = 0; jx <= d; ++jx, ++i) {
        t.val[static_cast<std::size_t>(q) * t.n_loc + i] = vx[jx] * vy[jy];
        t.dxi[static_cast<std::size_t>(q) * t.n_loc + i] = dx[jx] * vy[jy];
        t.deta[static_cast<std::size_t>(q) * t.n_loc + i] = vx[jx] * dy[jy];
      }
  }
  return t;
}

// On a square cell the Jacobian is h*Id, so the diffusion block is extent
// free, advection picks up one factor h and the load h^2.
CellMatrices local_from_table(const ShapeTable& t, const QuadratureRule& quad,
                              Point origin, double extent, Point beta,
                              const std::function<double(Point)>& source) {
  CellMatrices out;
  const int n = t.n_loc;
  out.K.assign(static_cast<std::size_t>(n) * n, 0.0);
  out.F.assign(n, 0.0);
  const bool advect = beta.x != 0.0 || beta.y != 0.0;
  for (int q = 0; q < t.n_q; ++q) {
    const double w = quad.weights[q];
    const Point p{origin.x + extent * quad.points[q].x,
                  origin.y + extent * quad.points[q].y};
    const double fw = w * extent * extent * source(p);
    const double* val = &t.val[static_cast<std::size_t>(q) * n];
    const double* dxi = &t.dxi[static_cast<std::size_t>(q) * n];
    const double* deta = &t.deta[static_cast<std::size_t>(q) * n];
    for (int i = 0; i < n; ++i) {
      out.F[i] += fw * val[i];
      const double wadv = advect ? w * extent * val[i] : 0.0;
      double* krow = &out.K[static_cast<std::size_t>(i) * n];
      for (int j = 0; j < n; ++j) {
        // The diffusion addend is evaluated symmetrically in i and j, so
        // the local matrix, and with it the assembled one, is bitwise
        // symmetric when beta = 0.
        double k = w * (dxi[i] * dxi[j] + deta[i] * deta[j]);
        if (advect) k += wadv * (beta.x * dxi[j] + beta.y * deta[j]);
        krow[j] += k;
      }
    }
  }
  return out;
}

// Scatter target of a local dof: either the dof itself or, for a
// constrained dof, its master list plus the inhomogeneity moved to the
// right hand side. Holds no storage of its own.
struct Target {
  const std::vector<std::pair<int, double>>* masters = nullptr;
  int self_dof = -1;
  double inhomogeneity = 0;

  int count() const {
    return masters ? static_cast<int>(masters->size()) : 1;
  }
  std::pair<int, double> entry(int k) const {
    return masters ? (*masters)[k] : std::pair<int, double>{self_dof, 1.0};
  }
};

Target target_of(int dof, const ConstraintSet& constraints) {
  if (const Constraint* c = constraints.get(dof))
    return {&c->masters, -1, c->inhomogeneity};
  return {nullptr, dof, 0.0};
}

}  // namespace

CellMatrices local_cell_matrix(const Mesh& mesh, int cell_id, int degree,
                               Point beta,
                               const std::function<double(Point)>& source,
                               const QuadratureRule& quad) {
  const ShapeTable t = build_shape_table(degree, quad);
  const Cell& c = mesh.cell(cell_id);
  return local_from_table(t, quad, mesh.cell_origin(c), mesh.cell_extent(c),
                          beta, source);
}

std::vector<CellMatrices> local_matrices(
    const FeSpace& space, Point beta,
    const std::function<double(Point)>& source, const QuadratureRule& quad,
    Execution exec) {
  const Mesh& mesh = space.mesh();
  const ShapeTable t = build_shape_table(space.degree(), quad);
  const auto& active = mesh.active_cell_ids();
  std::vector<CellMatrices> out(active.size());
  parallel::for_each_index(static_cast<int>(active.size()), exec, [&](int k) {
    const Cell& c = mesh.cell(active[k]);
    out[k] = local_from_table(t, quad, mesh.cell_origin(c),
                              mesh.cell_extent(c), beta, source);
  });
  return out;
}

LinearSystem assemble_system(const FeSpace& space,
                             const ConstraintSet& constraints, Point beta,
                             const std::function<double(Point)>& source,
                             const QuadratureRule& quad, Execution exec) {
  const Mesh& mesh = space.mesh();
  const auto& active = mesh.active_cell_ids();
  const int n_dofs = space.dof_count();
  const int n_loc = space.dofs_per_cell();

  // Sparsity pattern: all pairs of scatter targets within each cell, plus
  // an identity diagonal for every constrained row.
  std::vector<std::vector<int>> pattern(n_dofs);
  {
    std::vector<int> targets;
    for (int id : active) {
      targets.clear();
      for (int dof : space.cell_dofs(id)) {
        const Target t = target_of(dof, constraints);
        for (int e = 0; e < t.count(); ++e)
          targets.push_back(t.entry(e).first);
      }
      std::sort(targets.begin(), targets.end());
      targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
      for (int a : targets)
        for (int b : targets) pattern[a].push_back(b);
    }
    for (const Constraint& line : constraints.all())
      pattern[line.dof].push_back(line.dof);
    for (auto& row : pattern) {
      std::sort(row.begin(), row.end());
      row.erase(std::unique(row.begin(), row.end()), row.end());
    }
  }

  LinearSystem sys;
  sys.A = SparseMatrix::from_pattern(pattern);
  sys.rhs.assign(n_dofs, 0.0);

  const std::vector<CellMatrices> locals =
      local_matrices(space, beta, source, quad, exec);

  // Serial scatter in cell order, so the sums are independent of the
  // thread count. The off-diagonal pair (i,j), (j,i) is written back to
  // back per master combination with bitwise equal values when beta = 0,
  // which keeps the assembled matrix exactly symmetric including the
  // condensation terms, even when two slaves of one cell share masters.
  std::vector<Target> targets(n_loc);
  for (std::size_t k = 0; k < active.size(); ++k) {
    const auto& dofs = space.cell_dofs(active[k]);
    const CellMatrices& loc = locals[k];
    for (int i = 0; i < n_loc; ++i)
      targets[i] = target_of(dofs[i], constraints);

    auto scatter_pair = [&](int i, int j, double kij, double kji) {
      const Target& ti = targets[i];
      const Target& tj = targets[j];
      for (int a = 0; a < ti.count(); ++a) {
        const auto [ra, wa] = ti.entry(a);
        for (int b = 0; b < tj.count(); ++b) {
          const auto [rb, wb] = tj.entry(b);
          sys.A.entry(ra, rb) += (wa * wb) * kij;
          if (j != i) sys.A.entry(rb, ra) += (wb * wa) * kji;
        }
        if (tj.inhomogeneity != 0.0)
          sys.rhs[ra] -= wa * kij * tj.inhomogeneity;
      }
      if (j != i && ti.inhomogeneity != 0.0)
        for (int b = 0; b < tj.count(); ++b) {
          const auto [rb, wb] = tj.entry(b);
          sys.rhs[rb] -= wb * kji * ti.inhomogeneity;
        }
    };

    for (int i = 0; i < n_loc; ++i) {
      const Target& ti = targets[i];
      for (int a = 0; a < ti.count(); ++a) {
        const auto [ra, wa] = ti.entry(a);
        sys.rhs[ra] += wa * loc.F[i];
      }
      for (int j = 0; j <= i; ++j)
        scatter_pair(i, j, loc.K[static_cast<std::size_t>(i) * n_loc + j],
                     loc.K[static_cast<std::size_t>(j) * n_loc + i]);
    }
  }

  for (const Constraint& line : constraints.all()) {
    sys.A.entry(line.dof, line.dof) = 1.0;
    sys.rhs[line.dof] = line.inhomogeneity;
  }

  return sys;
}

}  // namespace safem
