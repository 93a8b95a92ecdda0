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

#include <string>
#include <vector>

#include "safem/estimator.hpp"
#include "safem/fe_space.hpp"

namespace safem {

// Legacy ASCII VTK (version 3.0) unstructured grid of the active cells as
// linear quads. u must be conforming; its vertex values become POINT_DATA
// "solution". Optional CELL_DATA: the per-cell indicator as "eta" and the
// marked set as 0/1 field "marked". Vertices are renumbered compactly in
// ascending mesh order.
void write_vtk(const std::string& path, const FeSpace& space,
               const std::vector<double>& u,
               const EstimatorResult* estimator = nullptr,
               const std::vector<int>* marked = nullptr);

// Mesh-only variant (no data sections).
void write_mesh_vtk(const std::string& path, const Mesh& mesh);

}  // namespace safem
