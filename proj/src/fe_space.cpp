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

#include "safem/fe_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace safem {

double shape_1d(int degree, int i, double t) {
  double num = 1.0, den = 1.0;
  for (int j = 0; j <= degree; ++j) {
    if (j == i) continue;
    num *= t - static_cast<double>(j) / degree;
    den *= static_cast<double>(i - j) / degree;
  }
  return num / den;
}

double shape_1d_derivative(int degree, int i, double t) {
  // Product rule over the Lagrange factors.
  double den = 1.0;
  for (int j = 0; j <= degree; ++j)
    if (j != i) den *= static_cast<double>(i - j) / degree;
  double sum = 0.0;
  for (int k = 0; k <= degree; ++k) {
    if (k == i) continue;
    double term = 1.0;
    for (int j = 0; j <= degree; ++j) {
      if (j == i || j == k) continue;
      term *= t - static_cast<double>(j) / degree;
    }
    sum += term;
  }
  return sum / den;
}

namespace {

std::uint64_t dof_key(std::int64_t gx, std::int64_t gy) {
  // gx, gy < 2^32: lattice coordinates below 2^32 / 3 times degree <= 3.
  return (static_cast<std::uint64_t>(gx) << 32) | static_cast<std::uint64_t>(gy);
}

}  // namespace

FeSpace::FeSpace(const Mesh& mesh, int degree) : mesh_(&mesh), degree_(degree) {
  if (degree < 1 || degree > 3)
    throw std::invalid_argument("FeSpace: degree must be 1, 2 or 3");
  cell_dofs_.resize(mesh.n_cells());
  const int d = degree_;
  for (int id : mesh.active_cell_ids()) {
    const Cell& c = mesh.cell(id);
    auto& dofs = cell_dofs_[id];
    dofs.reserve(dofs_per_cell());
    for (int jy = 0; jy <= d; ++jy)
      for (int jx = 0; jx <= d; ++jx) {
        // Support point (x0 + jx*span/d, ...) scaled by d to stay integer.
        const std::int64_t gx = c.x0 * d + c.span * jx;
        const std::int64_t gy = c.y0 * d + c.span * jy;
        auto [it, inserted] = dof_lookup_.try_emplace(dof_key(gx, gy), dof_count());
        if (inserted)
          support_points_.push_back(
              {mesh.position(0, 0).x + mesh.lattice_scale() * (static_cast<double>(gx) / d),
               mesh.position(0, 0).y + mesh.lattice_scale() * (static_cast<double>(gy) / d)});
        dofs.push_back(it->second);
      }
  }
}

int FeSpace::find_dof(std::int64_t gx, std::int64_t gy) const {
  auto it = dof_lookup_.find(dof_key(gx, gy));
  return it == dof_lookup_.end() ? -1 : it->second;
}

FeSpace::Eval FeSpace::evaluate(const std::vector<double>& u, Point p) const {
  const int cell = mesh_->locate(p);
  if (cell < 0)
    throw std::invalid_argument("FeSpace::evaluate: point outside the domain");
  return evaluate_in_cell(u, cell, p);
}

FeSpace::Eval FeSpace::evaluate_in_cell(const std::vector<double>& u,
                                        int cell_id, Point p) const {
  const Cell& c = mesh_->cell(cell_id);
  const Point o = mesh_->cell_origin(c);
  const double ext = mesh_->cell_extent(c);
  auto clamp01 = [](double t) { return std::min(1.0, std::max(0.0, t)); };
  const double xi = clamp01((p.x - o.x) / ext);
  const double eta = clamp01((p.y - o.y) / ext);
  const int d = degree_;
  double vx[4], vy[4], dx[4], dy[4];
  for (int j = 0; j <= d; ++j) {
    vx[j] = shape_1d(d, j, xi);
    vy[j] = shape_1d(d, j, eta);
    dx[j] = shape_1d_derivative(d, j, xi);
    dy[j] = shape_1d_derivative(d, j, eta);
  }
  Eval e;
  const auto& dofs = cell_dofs_[cell_id];
  int k = 0;
  for (int jy = 0; jy <= d; ++jy)
    for (int jx = 0; jx <= d; ++jx, ++k) {
      const double coeff = u[dofs[k]];
      e.value += coeff * vx[jx] * vy[jy];
      e.gradient.x += coeff * dx[jx] * vy[jy];
      e.gradient.y += coeff * vx[jx] * dy[jy];
    }
  e.gradient.x /= ext;
  e.gradient.y /= ext;
  return e;
}

void ConstraintSet::add(Constraint c) {
  auto [it, inserted] = index_of_dof_.try_emplace(c.dof, static_cast<int>(lines_.size()));
  if (!inserted) {
    // The same hanging dof can be reached from two cells sharing the
    // refined side; both produce the identical constraint, so keep the
    // first.
    return;
  }
  lines_.push_back(std::move(c));
  finalized_ = false;
}

bool ConstraintSet::is_constrained(int dof) const {
  return index_of_dof_.count(dof) != 0;
}

const Constraint* ConstraintSet::get(int dof) const {
  auto it = index_of_dof_.find(dof);
  return it == index_of_dof_.end() ? nullptr : &lines_[it->second];
}

void ConstraintSet::finalize() {
  // Repeatedly substitute constrained masters. Chains are short (a hanging
  // node's master can be hanging or Dirichlet at most a few links deep),
  // so a small pass limit is plenty and guards against accidental cycles.
  for (int pass = 0; pass < 32; ++pass) {
    bool changed = false;
    for (Constraint& line : lines_) {
      bool dirty = false;
      for (const auto& [m, w] : line.masters)
        if (is_constrained(m)) dirty = true;
      if (!dirty) continue;
      changed = true;
      std::vector<std::pair<int, double>> expanded;
      double inhom = line.inhomogeneity;
      for (const auto& [m, w] : line.masters) {
        const Constraint* sub = get(m);
        if (!sub) {
          expanded.emplace_back(m, w);
          continue;
        }
        inhom += w * sub->inhomogeneity;
        for (const auto& [mm, ww] : sub->masters) expanded.emplace_back(mm, w * ww);
      }
      // Merge duplicate masters deterministically by dof id.
      std::sort(expanded.begin(), expanded.end());
      std::vector<std::pair<int, double>> merged;
      for (const auto& [m, w] : expanded) {
        if (!merged.empty() && merged.back().first == m)
          merged.back().second += w;
        else
          merged.emplace_back(m, w);
      }
      line.masters = std::move(merged);
      line.inhomogeneity = inhom;
    }
    if (!changed) {
      finalized_ = true;
      return;
    }
  }
  throw std::runtime_error("ConstraintSet::finalize: constraint chain does not terminate");
}

void ConstraintSet::apply(std::vector<double>& u) const {
  for (const Constraint& line : lines_) {
    double v = line.inhomogeneity;
    for (const auto& [m, w] : line.masters) v += w * u[m];
    u[line.dof] = v;
  }
}

void ConstraintSet::set_condensed(std::vector<double>& u) const {
  for (const Constraint& line : lines_) u[line.dof] = line.inhomogeneity;
}

ConstraintSet build_constraints(const FeSpace& space,
                                const std::function<double(Point)>& g) {
  const Mesh& mesh = space.mesh();
  const int d = space.degree();
  ConstraintSet out;

  // Local dof indices of one side, ordered along the side axis
  // (0=west, 1=east, 2=south, 3=north).
  auto side_dofs = [&](const std::vector<int>& dofs, int side) {
    std::vector<int> s(d + 1);
    for (int k = 0; k <= d; ++k) {
      switch (side) {
        case 0: s[k] = dofs[k * (d + 1)]; break;
        case 1: s[k] = dofs[k * (d + 1) + d]; break;
        case 2: s[k] = dofs[k]; break;
        default: s[k] = dofs[d * (d + 1) + k]; break;
      }
    }
    return s;
  };

  // Dirichlet first: boundary sides, then hanging constraints. A hanging
  // dof never lies on the domain boundary (the coarse neighbor side it
  // hangs on is interior), so the two kinds never collide.
  for (int id : mesh.active_cell_ids()) {
    const auto& dofs = space.cell_dofs(id);
    for (int side = 0; side < 4; ++side) {
      if (mesh.side_neighbors(id, side)[0] >= 0) continue;
      for (int dof : side_dofs(dofs, side))
        out.add({dof, {}, g ? g(space.support_point(dof)) : 0.0});
    }
  }

  for (int id : mesh.active_cell_ids()) {
    const Cell& c = mesh.cell(id);
    for (int side = 0; side < 4; ++side) {
      const auto [n1, n2] = mesh.side_neighbors(id, side);
      if (n1 < 0 || n1 != n2) continue;
      const Cell& nc = mesh.cell(n1);
      if (nc.level >= c.level) continue;
      // This cell is the fine side of a nonconforming interface; its side
      // dofs interpolate the coarse neighbor's trace on the opposite side.
      const int opposite = side ^ 1;
      const std::vector<int> masters = side_dofs(space.cell_dofs(n1), opposite);
      const std::vector<int> slaves = side_dofs(space.cell_dofs(id), side);
      const bool along_y = side < 2;
      const std::int64_t c0 = along_y ? c.y0 : c.x0;
      const std::int64_t n0 = along_y ? nc.y0 : nc.x0;
      for (int k = 0; k <= d; ++k) {
        // Position of slave k on the coarse side in degree-scaled lattice
        // units; rel is in [0, span * d].
        const std::int64_t rel = (c0 - n0) * d + c.span * k;
        if (rel % nc.span == 0) continue;  // coincides with a master dof
        const double t = static_cast<double>(rel) / static_cast<double>(nc.span * d);
        Constraint line;
        line.dof = slaves[k];
        for (int m = 0; m <= d; ++m) {
          const double w = shape_1d(d, m, t);
          if (w != 0.0) line.masters.emplace_back(masters[m], w);
        }
        out.add(std::move(line));
      }
    }
  }

  out.finalize();
  return out;
}

}  // namespace safem
