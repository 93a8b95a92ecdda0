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

#include "safem/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace safem {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Fixed-sequence generator for the consistency check sample points; this
// is a plain deterministic function, not a configurable RNG.
struct SampleSequence {
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  double next() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>(state >> 11) * 0x1p-53;
  }
};

Mesh uniformly_refined_lshape(int times) {
  Mesh m = Mesh::lshape();
  for (int i = 0; i < times; ++i) m = m.refine(m.active_cell_ids());
  return m;
}

}  // namespace

ProblemSpec make_peak2d() {
  ProblemSpec p;
  p.name = "peak2d";
  p.beta = {0.0, 0.0};
  p.default_resolution = 4;
  // Zero-boundary bubble times a narrow Gaussian centered off the mesh
  // symmetry lines so no cell family is accidentally preferred.
  const double a = 100.0, cx = 0.5, cy = 0.117;
  p.exact = [=](Point q) {
    const double dx = q.x - cx, dy = q.y - cy;
    return q.x * (1.0 - q.x) * q.y * (1.0 - q.y) *
           std::exp(-a * (dx * dx + dy * dy));
  };
  p.exact_gradient = [=](Point q) {
    const double dx = q.x - cx, dy = q.y - cy;
    const double E = std::exp(-a * (dx * dx + dy * dy));
    const double P = q.x * (1.0 - q.x), Q = q.y * (1.0 - q.y);
    const double Px = 1.0 - 2.0 * q.x, Qy = 1.0 - 2.0 * q.y;
    return Point{E * Q * (Px - 2.0 * a * dx * P),
                 E * P * (Qy - 2.0 * a * dy * Q)};
  };
  p.source = [=](Point q) {
    const double dx = q.x - cx, dy = q.y - cy;
    const double E = std::exp(-a * (dx * dx + dy * dy));
    const double P = q.x * (1.0 - q.x), Q = q.y * (1.0 - q.y);
    const double Px = 1.0 - 2.0 * q.x, Qy = 1.0 - 2.0 * q.y;
    const double uxx =
        E * Q * (-2.0 - 4.0 * a * dx * Px - 2.0 * a * P + 4.0 * a * a * dx * dx * P);
    const double uyy =
        E * P * (-2.0 - 4.0 * a * dy * Qy - 2.0 * a * Q + 4.0 * a * a * dy * dy * Q);
    return -(uxx + uyy);
  };
  p.boundary = p.exact;
  p.make_mesh = [](int n) {
    return Mesh::unit_square(n > 0 ? n : 4);
  };
  check_source_consistency(p);
  return p;
}

ProblemSpec make_corner2d() {
  ProblemSpec p;
  p.name = "corner2d";
  p.beta = {0.0, 0.0};
  p.default_resolution = 2;
  // r^(2/3) sin(2 phi / 3) with phi measured from the reentrant edge
  // {x = 0, y >= 0}: harmonic, zero on both reentrant edges, gradient
  // unbounded at the corner. The branch cut of phi lies in the removed
  // quadrant, so the function is smooth across the negative x axis.
  auto polar = [](Point q, double& r, double& phi) {
    r = std::hypot(q.x, q.y);
    double th = std::atan2(q.y, q.x);
    if (th < 0.5 * kPi) th += 2.0 * kPi;
    phi = th - 0.5 * kPi;
  };
  p.exact = [=](Point q) {
    double r, phi;
    polar(q, r, phi);
    return std::cbrt(r * r) * std::sin(2.0 * phi / 3.0);
  };
  p.exact_gradient = [=](Point q) {
    double r, phi;
    polar(q, r, phi);
    if (r < 1e-200) return Point{0.0, 0.0};
    const double s = std::sin(2.0 * phi / 3.0), c = std::cos(2.0 * phi / 3.0);
    const double ur = (2.0 / 3.0) * s / std::cbrt(r);
    const double ut = (2.0 / 3.0) * c / std::cbrt(r);
    const double th = phi + 0.5 * kPi;
    const double ct = std::cos(th), st = std::sin(th);
    return Point{ur * ct - ut * st, ur * st + ut * ct};
  };
  p.source = [](Point) { return 0.0; };
  p.boundary = p.exact;
  p.make_mesh = [](int n) {
    return uniformly_refined_lshape(n > 0 ? n : 2);
  };
  check_source_consistency(p);
  return p;
}

ProblemSpec make_drift2d(double beta) {
  if (beta == 0.0)
    throw std::invalid_argument("make_drift2d: beta must be nonzero");
  if (!(std::abs(beta) <= 500.0))
    throw std::invalid_argument("make_drift2d: |beta| must be at most 500");
  ProblemSpec p;
  p.name = "drift2d";
  p.beta = {beta, beta};
  p.default_resolution = 4;
  // Boundary layers of width 1/beta at x = 1 and y = 1; the diffusion and
  // drift contributions cancel so that f is a constant.
  const double D = std::expm1(beta);
  p.exact = [=](Point q) {
    return q.x + q.y - std::expm1(beta * q.x) / D - std::expm1(beta * q.y) / D;
  };
  p.exact_gradient = [=](Point q) {
    return Point{1.0 - beta * std::exp(beta * q.x) / D,
                 1.0 - beta * std::exp(beta * q.y) / D};
  };
  p.source = [=](Point) { return 2.0 * beta; };
  p.boundary = p.exact;
  p.make_mesh = [](int n) {
    return Mesh::unit_square(n > 0 ? n : 4);
  };
  check_source_consistency(p);
  return p;
}

void check_source_consistency(const ProblemSpec& p) {
  const Mesh mesh = p.make_mesh(0);
  const double h = 1e-5;
  const double margin = 0.05;
  // Bounding box of the root layout in physical coordinates.
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  for (int i = 0; i < mesh.n_vertices(); ++i) {
    const Point q = mesh.vertex_position(i);
    x0 = std::min(x0, q.x);
    y0 = std::min(y0, q.y);
    x1 = std::max(x1, q.x);
    y1 = std::max(y1, q.y);
  }

  SampleSequence seq;
  int accepted = 0;
  for (int attempt = 0; attempt < 100000 && accepted < 100; ++attempt) {
    const Point q{x0 + (x1 - x0) * seq.next(), y0 + (y1 - y0) * seq.next()};
    // Interior with margin: axis and diagonal probes must all stay in the
    // domain. The diagonal ones keep the samples away from reentrant
    // corners, where difference quotients of a singular solution are
    // meaningless.
    bool inside = mesh.locate(q) >= 0;
    for (int sx = -1; sx <= 1 && inside; ++sx)
      for (int sy = -1; sy <= 1 && inside; ++sy)
        inside = mesh.locate({q.x + sx * margin, q.y + sy * margin}) >= 0;
    if (!inside) continue;
    ++accepted;
    const double uc = p.exact(q);
    const double uxp = p.exact({q.x + h, q.y}), uxm = p.exact({q.x - h, q.y});
    const double uyp = p.exact({q.x, q.y + h}), uym = p.exact({q.x, q.y - h});
    const double lap = (uxp + uxm + uyp + uym - 4.0 * uc) / (h * h);
    const double gx = (uxp - uxm) / (2.0 * h);
    const double gy = (uyp - uym) / (2.0 * h);
    const double f_fd = -lap + p.beta.x * gx + p.beta.y * gy;
    if (std::abs(f_fd - p.source(q)) > 1e-4)
      throw std::logic_error(p.name + ": source term does not match the exact solution");
    // The stored gradient must agree with finite differences as well.
    const Point g = p.exact_gradient(q);
    if (std::abs(g.x - gx) > 1e-4 || std::abs(g.y - gy) > 1e-4)
      throw std::logic_error(p.name + ": gradient does not match the exact solution");
  }
  if (accepted < 100)
    throw std::logic_error(p.name + ": could not find interior sample points");
}

}  // namespace safem
