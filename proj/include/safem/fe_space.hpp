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

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "safem/mesh.hpp"

namespace safem {

// 1D Lagrange shape function of the given degree with equispaced nodes
// j/degree on [0,1]: value and derivative of shape i at t.
double shape_1d(int degree, int i, double t);
double shape_1d_derivative(int degree, int i, double t);

// One algebraic constraint: the slave dof equals
// sum_k weight_k * u[master_k] + inhomogeneity. Dirichlet constraints have
// an empty master list and carry the boundary value in the inhomogeneity.
struct Constraint {
  int dof = -1;
  std::vector<std::pair<int, double>> masters;
  double inhomogeneity = 0;
};

class ConstraintSet {
 public:
  void add(Constraint c);
  // Flattens chains so that no master is itself constrained; must be called
  // before the set is used. Dirichlet values referenced by hanging-node
  // constraints fold into the inhomogeneity.
  void finalize();

  bool is_constrained(int dof) const;
  const Constraint* get(int dof) const;
  int n_constraints() const { return static_cast<int>(lines_.size()); }
  const std::vector<Constraint>& all() const { return lines_; }

  // Overwrites constrained entries with their values computed from the
  // masters (makes a coefficient vector conforming).
  void apply(std::vector<double>& u) const;
  // Overwrites constrained entries with the value the condensed linear
  // system pins them to: the identity-row right hand side, i.e. the
  // inhomogeneity (zero for hanging nodes, g for Dirichlet).
  void set_condensed(std::vector<double>& u) const;

 private:
  std::vector<Constraint> lines_;
  std::unordered_map<int, int> index_of_dof_;
  bool finalized_ = false;
};

// Scalar tensor-product Lagrange space of degree 1..3 on the active cells
// of a mesh, with equispaced support points. Local dofs on a cell are
// ordered lexicographically (x fastest, bottom row first). Dofs on shared
// interfaces are identified through exact lattice keys, so the numbering is
// independent of floating point and of traversal details beyond cell order.
class FeSpace {
 public:
  FeSpace(const Mesh& mesh, int degree);

  const Mesh& mesh() const { return *mesh_; }
  int degree() const { return degree_; }
  int dofs_per_cell() const { return (degree_ + 1) * (degree_ + 1); }
  int dof_count() const { return static_cast<int>(support_points_.size()); }
  const std::vector<int>& cell_dofs(int cell_id) const {
    return cell_dofs_[cell_id];
  }
  Point support_point(int dof) const { return support_points_[dof]; }

  // Dof at a lattice position scaled by degree (gx = ix * degree + ...);
  // -1 if no dof sits there. Used to look up vertex and edge dofs exactly.
  int find_dof(std::int64_t gx, std::int64_t gy) const;

  struct Eval {
    double value = 0;
    Point gradient;
  };
  // p must lie inside the domain; throws std::invalid_argument otherwise.
  Eval evaluate(const std::vector<double>& u, Point p) const;
  // p must lie in the closure of the given active cell. Used to evaluate
  // one-sided quantities on edges.
  Eval evaluate_in_cell(const std::vector<double>& u, int cell_id,
                        Point p) const;

 private:
  const Mesh* mesh_;
  int degree_;
  std::vector<std::vector<int>> cell_dofs_;
  std::vector<Point> support_points_;
  std::unordered_map<std::uint64_t, int> dof_lookup_;
};

// Builds the hanging-node constraints of the space plus Dirichlet
// constraints on the whole boundary with values interpolated from g.
// The returned set is finalized.
ConstraintSet build_constraints(const FeSpace& space,
                                const std::function<double(Point)>& g);

}  // namespace safem
