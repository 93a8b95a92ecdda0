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

#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "safem/quadrature.hpp"

using namespace safem;

namespace {

double integrate_1d(const QuadratureRule1D& r, double (*f)(double)) {
  double s = 0;
  for (std::size_t i = 0; i < r.points.size(); ++i)
    s += r.weights[i] * f(r.points[i]);
  return s;
}

double pow_int(double x, int k) {
  double r = 1;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace

TEST_CASE("1d rules: weights sum to one, points inside (0,1), ascending") {
  for (int n = 1; n <= 6; ++n) {
    const QuadratureRule1D r = gauss_rule_1d(n);
    REQUIRE(r.points.size() == static_cast<std::size_t>(n));
    REQUIRE(r.weights.size() == static_cast<std::size_t>(n));
    double ws = 0;
    for (double w : r.weights) {
      CHECK(w > 0);
      ws += w;
    }
    CHECK(ws == doctest::Approx(1.0).epsilon(1e-15));
    for (std::size_t i = 0; i < r.points.size(); ++i) {
      CHECK(r.points[i] > 0.0);
      CHECK(r.points[i] < 1.0);
      if (i > 0) CHECK(r.points[i] > r.points[i - 1]);
    }
  }
}

TEST_CASE("1d rules integrate monomials up to degree 2n-1 exactly") {
  for (int n = 1; n <= 6; ++n) {
    const QuadratureRule1D r = gauss_rule_1d(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0;
      for (std::size_t i = 0; i < r.points.size(); ++i)
        s += r.weights[i] * pow_int(r.points[i], k);
      // integral of x^k over [0,1] is 1/(k+1)
      CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-14));
    }
  }
}

TEST_CASE("two point rule: nodes at 0.5 +- 1/(2 sqrt 3), x^3 exact") {
  const QuadratureRule1D r = gauss_rule_1d(2);
  const double offset = 0.5 / std::sqrt(3.0);
  CHECK(r.points[0] == doctest::Approx(0.5 - offset).epsilon(1e-15));
  CHECK(r.points[1] == doctest::Approx(0.5 + offset).epsilon(1e-15));
  CHECK(r.weights[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r.weights[1] == doctest::Approx(0.5).epsilon(1e-15));
  const double s = integrate_1d(r, [](double x) { return x * x * x; });
  CHECK(s == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("tensor rule: n^2 points, x fastest, weights products, sum one") {
  for (int n = 1; n <= 6; ++n) {
    const QuadratureRule q = gauss_rule(n);
    const QuadratureRule1D base = gauss_rule_1d(n);
    REQUIRE(q.points.size() == static_cast<std::size_t>(n) * n);
    CHECK(q.points_per_direction == n);
    double ws = 0;
    for (double w : q.weights) ws += w;
    CHECK(ws == doctest::Approx(1.0).epsilon(1e-14));
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const Point p = q.points[j * n + i];
        CHECK(p.x == base.points[i]);
        CHECK(p.y == base.points[j]);
        CHECK(q.weights[j * n + i] == base.weights[i] * base.weights[j]);
      }
  }
}

TEST_CASE("tensor rule 2: four points with weight 1/4 each") {
  const QuadratureRule q = gauss_rule(2);
  for (double w : q.weights) CHECK(w == doctest::Approx(0.25).epsilon(1e-15));
  // x^3 y^3 has the separable exact value 1/16.
  double s = 0;
  for (std::size_t i = 0; i < q.points.size(); ++i)
    s += q.weights[i] * pow_int(q.points[i].x, 3) * pow_int(q.points[i].y, 3);
  CHECK(s == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
}

TEST_CASE("more points never hurt on a smooth integrand") {
  // exact integral of e^(x+y) over the unit square
  const double exact = (std::exp(1.0) - 1.0) * (std::exp(1.0) - 1.0);
  double prev_err = 1e300;
  for (int n = 1; n <= 6; ++n) {
    const QuadratureRule q = gauss_rule(n);
    double s = 0;
    for (std::size_t i = 0; i < q.points.size(); ++i)
      s += q.weights[i] * std::exp(q.points[i].x + q.points[i].y);
    const double err = std::abs(s - exact);
    CHECK(err <= prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 1e-14);
}

TEST_CASE("unsupported point counts are rejected") {
  CHECK_THROWS_AS(gauss_rule_1d(0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_rule_1d(7), std::invalid_argument);
  CHECK_THROWS_AS(gauss_rule(-1), std::invalid_argument);
}
