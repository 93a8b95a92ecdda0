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
#include <string>

#include "safem/mesh.hpp"

namespace safem {

// A benchmark problem: -laplace(u) + beta . grad u = f with Dirichlet data
// g = trace of the known exact solution. make_mesh(n) builds the initial
// mesh; n <= 0 picks the problem default.
struct ProblemSpec {
  std::string name;
  Point beta;
  std::function<double(Point)> exact;
  std::function<Point(Point)> exact_gradient;
  std::function<double(Point)> source;
  std::function<double(Point)> boundary;
  std::function<Mesh(int)> make_mesh;
  int default_resolution = 0;
};

// Smooth solution with a sharp interior peak near (0.5, 0.12) on the unit
// square, homogeneous boundary values.
ProblemSpec make_peak2d();

// Laplace problem on the L-shaped domain with the r^(2/3) corner
// singularity at the reentrant corner; f = 0.
ProblemSpec make_corner2d();

// Constant-drift problem on the unit square with boundary layers at x = 1
// and y = 1 of width 1/beta; f is exactly 2*beta.
ProblemSpec make_drift2d(double beta);

// Verifies -laplace(u) + beta . grad u = f by central differences (step
// 1e-5) at 100 deterministic interior sample points, tolerance 1e-4.
// Throws std::logic_error on a mismatch. The three factories above run
// this check before returning.
void check_source_consistency(const ProblemSpec& p);

}  // namespace safem
