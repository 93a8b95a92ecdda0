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

#include "safem/quadrature.hpp"

#include <stdexcept>

namespace safem {

namespace {

// Gauss-Legendre abscissas/weights on [-1,1], positive half only; mirrored
// below. Values to 17 significant digits.
struct HalfRule {
  int n;
  double x[3];
  double w[3];
};

const HalfRule kRules[] = {
    {1, {0.0}, {2.0}},
    {2, {0.57735026918962576}, {1.0}},
    {3, {0.0, 0.77459666924148338}, {0.88888888888888889, 0.55555555555555556}},
    {4,
     {0.33998104358485626, 0.86113631159405258},
     {0.65214515486254614, 0.34785484513745386}},
    {5,
     {0.0, 0.53846931010568309, 0.90617984593866399},
     {0.56888888888888889, 0.47862867049936647, 0.23692688505618909}},
    {6,
     {0.23861918608319691, 0.66120938646626451, 0.93246951420315203},
     {0.46791393457269105, 0.36076157304813861, 0.17132449237917035}},
};

}  // namespace

QuadratureRule1D gauss_rule_1d(int n) {
  if (n < 1 || n > 6)
    throw std::invalid_argument("gauss_rule_1d: supported point counts are 1..6");
  const HalfRule& r = kRules[n - 1];
  // Expand to the full symmetric rule on [-1,1] in ascending order, then
  // map to [0,1]: x -> (1+x)/2, w -> w/2.
  std::vector<double> xs, ws;
  const int half = (n + 1) / 2;
  const bool odd = (n % 2) != 0;
  for (int i = half - 1; i >= (odd ? 1 : 0); --i) {
    xs.push_back(-r.x[i]);
    ws.push_back(r.w[i]);
  }
  for (int i = 0; i < half; ++i) {
    xs.push_back(r.x[i]);
    ws.push_back(r.w[i]);
  }
  QuadratureRule1D out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out.points.push_back(0.5 * (1.0 + xs[i]));
    out.weights.push_back(0.5 * ws[i]);
  }
  return out;
}

QuadratureRule gauss_rule(int n) {
  QuadratureRule1D base = gauss_rule_1d(n);
  QuadratureRule out;
  out.points_per_direction = n;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      out.points.push_back({base.points[i], base.points[j]});
      out.weights.push_back(base.weights[i] * base.weights[j]);
    }
  return out;
}

}  // namespace safem
