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

#include "safem/transfer.hpp"

#include <stdexcept>

namespace safem {

Prolongation build_prolongation(const FeSpace& coarse, const FeSpace& fine) {
  if (coarse.degree() != fine.degree())
    throw std::invalid_argument("build_prolongation: degrees differ");
  const Mesh& cm = coarse.mesh();
  const Mesh& fm = fine.mesh();
  if (fm.n_cells() < cm.n_cells())
    throw std::invalid_argument("build_prolongation: fine mesh is not a refinement");
  // Nestedness: the fine mesh must extend the coarse cell array in place.
  for (int id = 0; id < cm.n_cells(); ++id) {
    const Cell& a = cm.cell(id);
    const Cell& b = fm.cell(id);
    if (a.x0 != b.x0 || a.y0 != b.y0 || a.span != b.span || a.level != b.level)
      throw std::invalid_argument("build_prolongation: fine mesh is not a refinement");
  }

  const int d = coarse.degree();
  Prolongation p;
  p.rows.resize(fine.dof_count());
  std::vector<bool> done(fine.dof_count(), false);

  for (int fid : fm.active_cell_ids()) {
    // Walk up to the coarse-active ancestor (the cell itself if it already
    // existed and is still active in the coarse mesh).
    int cid = fid;
    while (cid >= cm.n_cells() || !cm.cell(cid).active) {
      cid = fm.cell(cid).parent;
      if (cid < 0)
        throw std::invalid_argument("build_prolongation: no coarse ancestor");
    }
    const Cell& cc = cm.cell(cid);
    const Cell& fc = fm.cell(fid);
    const auto& fdofs = fine.cell_dofs(fid);
    const auto& cdofs = coarse.cell_dofs(cid);
    int k = 0;
    for (int jy = 0; jy <= d; ++jy)
      for (int jx = 0; jx <= d; ++jx, ++k) {
        const int fd = fdofs[k];
        if (done[fd]) continue;
        done[fd] = true;
        // Position of the fine dof in degree-scaled lattice units,
        // relative to the coarse cell.
        const std::int64_t rx = (fc.x0 - cc.x0) * d + fc.span * jx;
        const std::int64_t ry = (fc.y0 - cc.y0) * d + fc.span * jy;
        if (rx % cc.span == 0 && ry % cc.span == 0) {
          // Coincides with a coarse dof: exact single-entry row.
          const int ci = static_cast<int>(rx / cc.span);
          const int cj = static_cast<int>(ry / cc.span);
          p.rows[fd].emplace_back(cdofs[cj * (d + 1) + ci], 1.0);
          continue;
        }
        const double xi =
            static_cast<double>(rx) / static_cast<double>(cc.span * d);
        const double eta =
            static_cast<double>(ry) / static_cast<double>(cc.span * d);
        double vx[4], vy[4];
        for (int j = 0; j <= d; ++j) {
          vx[j] = shape_1d(d, j, xi);
          vy[j] = shape_1d(d, j, eta);
        }
        int m = 0;
        for (int cy = 0; cy <= d; ++cy)
          for (int cx = 0; cx <= d; ++cx, ++m) {
            const double w = vx[cx] * vy[cy];
            if (w != 0.0) p.rows[fd].emplace_back(cdofs[m], w);
          }
      }
  }
  return p;
}

std::vector<double> prolong(const Prolongation& p,
                            const std::vector<double>& u_coarse) {
  std::vector<double> out(p.rows.size(), 0.0);
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    double v = 0.0;
    for (const auto& [m, w] : p.rows[i]) v += w * u_coarse[m];
    out[i] = v;
  }
  return out;
}

}  // namespace safem
