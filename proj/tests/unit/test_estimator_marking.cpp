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

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "safem/estimator.hpp"
#include "safem/marking.hpp"

#include "test_util.hpp"

using namespace safem;

namespace {

ConstraintSet no_constraints() {
  ConstraintSet c;
  c.finalize();
  return c;
}

// Reference implementation of bulk marking: try every distinct indicator
// value as the threshold, keep the largest one whose superlevel set carries
// at least theta of the total squared mass.
std::vector<int> dorfler_oracle(const std::map<int, double>& eta,
                                double theta) {
  double total = 0;
  for (const auto& [id, e] : eta) total += e * e;
  if (theta == 0.0 || total == 0.0) return {};
  std::vector<double> levels;
  for (const auto& [id, e] : eta)
    if (e > 0) levels.push_back(e);
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  for (double level : levels) {
    double mass = 0;
    for (const auto& [id, e] : eta)
      if (e >= level) mass += e * e;
    if (mass >= theta * total) {
      std::vector<int> out;
      for (const auto& [id, e] : eta)
        if (e >= level) out.push_back(id);
      return out;
    }
  }
  std::vector<int> out;  // theta == 1 with rounding: every positive cell
  for (const auto& [id, e] : eta)
    if (e > 0) out.push_back(id);
  return out;
}

std::vector<int> fixed_fraction_oracle(const std::map<int, double>& eta,
                                       double fraction) {
  std::vector<std::pair<double, int>> order;
  for (const auto& [id, e] : eta) order.push_back({e, id});
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  const int n = static_cast<int>(order.size());
  const int k = std::min(
      n, static_cast<int>(std::ceil(fraction * static_cast<double>(n))));
  std::vector<int> out;
  for (int i = 0; i < k; ++i) out.push_back(order[i].second);
  std::sort(out.begin(), out.end());
  return out;
}

std::map<int, double> random_eta(test_util::Lcg& rng) {
  std::map<int, double> eta;
  const int n = 1 + rng.index(40);
  int id = 0;
  for (int i = 0; i < n; ++i) {
    id += 1 + rng.index(3);  // leave gaps: ids are mesh cell ids, not 0..n
    const double roll = rng.uniform();
    if (roll < 0.15)
      eta[id] = 0.0;
    else if (roll < 0.3 && !eta.empty())
      eta[id] = eta.begin()->second;  // force exact ties
    else
      eta[id] = rng.uniform(0.0, 5.0);
  }
  return eta;
}

}  // namespace

TEST_CASE("jump of a tent function across one straight interface") {
  // v interpolates 1 - |x - 1| on [0,2] x [0,1]: the normal derivative
  // jumps by 2 along x = 1, and J_E^2 = h * integral of 4 over the unit
  // edge = 4
  const Mesh m = Mesh::rectangle_grid(2, 1);
  const FeSpace space(m, 1);
  std::vector<double> u(space.dof_count());
  for (int i = 0; i < space.dof_count(); ++i)
    u[i] = 1.0 - std::abs(space.support_point(i).x - 1.0);
  const EstimatorResult res =
      jump_estimator(space, no_constraints(), u, gauss_rule_1d(2));
  CHECK(res.global_J == doctest::Approx(2.0).epsilon(1e-13));
  REQUIRE(res.per_cell.size() == 2);
  CHECK(res.per_cell.at(0) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(res.per_cell.at(1) == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("a single cell has no interior edges and zero indicator") {
  const Mesh m = Mesh::unit_square(1);
  const FeSpace space(m, 1);
  const std::vector<double> u{1, -2, 3, 4};
  const EstimatorResult res =
      jump_estimator(space, no_constraints(), u, gauss_rule_1d(2));
  CHECK(res.global_J == 0.0);
  REQUIRE(res.per_cell.size() == 1);
  CHECK(res.per_cell.at(0) == 0.0);
}

TEST_CASE("globally smooth interpolants produce no jumps") {
  struct Probe {
    int degree;
    double (*f)(Point);
  };
  const Probe probes[] = {
      {1, [](Point p) { return 3 * p.x + 2 * p.y - 1; }},
      {2, [](Point p) { return p.x * p.x - p.y * p.y + p.x * p.y; }},
      {3, [](Point p) { return p.x * p.x * p.x + p.y * p.y; }},
  };
  for (const Probe& probe : probes) {
    const Mesh m = test_util::refined_mesh(2, 3, 19);
    const FeSpace space(m, probe.degree);
    const ConstraintSet constraints = build_constraints(space, probe.f);
    std::vector<double> u(space.dof_count());
    for (int i = 0; i < space.dof_count(); ++i)
      u[i] = probe.f(space.support_point(i));
    // constrained entries must not matter: poison them
    for (const Constraint& c : constraints.all()) u[c.dof] = 999.0;
    const EstimatorResult res =
        jump_estimator(space, constraints, u, gauss_rule_1d(probe.degree + 1));
    CHECK(res.global_J <= 1e-10);
  }
}

TEST_CASE("cell indicators split every edge contribution exactly in two") {
  const Mesh m = test_util::refined_mesh(2, 4, 47);
  const FeSpace space(m, 2);
  const ConstraintSet constraints =
      build_constraints(space, [](Point) { return 0.0; });
  const auto u = test_util::random_vector(space.dof_count(), 321);
  const EstimatorResult res =
      jump_estimator(space, constraints, u, gauss_rule_1d(3));
  double sum_sq = 0;
  for (const auto& [id, eta] : res.per_cell) sum_sq += eta * eta;
  CHECK(res.global_J * res.global_J ==
        doctest::Approx(0.5 * sum_sq).epsilon(1e-12));
  // every active cell is present, inactive cells are not
  CHECK(static_cast<int>(res.per_cell.size()) == m.n_active_cells());
  for (const auto& [id, eta] : res.per_cell) {
    CHECK(m.cell(id).active);
    CHECK(eta >= 0.0);
  }
}

TEST_CASE("edge quadrature of degree+1 points is already exact") {
  for (int d = 1; d <= 3; ++d) {
    const Mesh m = test_util::refined_mesh(2, 3, 61);
    const FeSpace space(m, d);
    const ConstraintSet constraints =
        build_constraints(space, [](Point p) { return p.x; });
    const auto u = test_util::random_vector(space.dof_count(), 77 + d);
    const double j_low =
        jump_estimator(space, constraints, u, gauss_rule_1d(d + 1)).global_J;
    const double j_high =
        jump_estimator(space, constraints, u, gauss_rule_1d(6)).global_J;
    CHECK(j_low == doctest::Approx(j_high).epsilon(1e-13));
  }
}

TEST_CASE("estimator is independent of the execution mode") {
  const Mesh m = test_util::refined_mesh(2, 4, 83);
  const FeSpace space(m, 1);
  const ConstraintSet constraints =
      build_constraints(space, [](Point) { return 0.0; });
  const auto u = test_util::random_vector(space.dof_count(), 55);
  const EstimatorResult serial =
      jump_estimator(space, constraints, u, gauss_rule_1d(2), Execution::Serial);
  const EstimatorResult parallel = jump_estimator(space, constraints, u,
                                                  gauss_rule_1d(2),
                                                  Execution::Parallel);
  CHECK(serial.global_J == parallel.global_J);
  CHECK(serial.per_cell == parallel.per_cell);
}

TEST_CASE("bulk marking: frozen small cases") {
  const std::map<int, double> eta{{0, 3.0}, {1, 2.0}, {2, 1.0}};
  CHECK(mark_dorfler(eta, 0.3) == std::vector<int>{0});
  CHECK(mark_dorfler(eta, 0.7) == std::vector<int>{0, 1});
  CHECK(mark_dorfler(eta, 0.0) == std::vector<int>{});
  CHECK(mark_dorfler(eta, 1.0) == std::vector<int>{0, 1, 2});
  CHECK_THROWS_AS(mark_dorfler(eta, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(mark_dorfler(eta, 1.1), std::invalid_argument);
  CHECK(mark_dorfler({}, 0.5) == std::vector<int>{});
  CHECK(mark_dorfler({{3, 0.0}, {9, 0.0}}, 0.5) == std::vector<int>{});
}

TEST_CASE("bulk marking includes all threshold ties") {
  // one tied cell satisfies the bulk criterion alone, but the marked set
  // must not depend on which of the tied ids sorts first
  const std::map<int, double> eta{{0, 2.0}, {1, 2.0}, {2, 1.0}, {3, 2.0}};
  CHECK(mark_dorfler(eta, 0.3) == std::vector<int>{0, 1, 3});
  // a cell with zero indicator is never marked, even at theta = 1
  const std::map<int, double> with_zero{{4, 1.0}, {6, 0.0}};
  CHECK(mark_dorfler(with_zero, 1.0) == std::vector<int>{4});
}

TEST_CASE("bulk marking agrees with the threshold-scan oracle") {
  test_util::Lcg rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::map<int, double> eta = random_eta(rng);
    const double theta = trial % 10 == 0 ? 1.0 : rng.uniform();
    const std::vector<int> marked = mark_dorfler(eta, theta);
    CHECK(marked == dorfler_oracle(eta, theta));
    CHECK(std::is_sorted(marked.begin(), marked.end()));
    // bulk property, directly
    double total = 0, mass = 0;
    for (const auto& [id, e] : eta) total += e * e;
    for (int id : marked) mass += eta.at(id) * eta.at(id);
    if (theta > 0 && total > 0)
      CHECK(mass >= theta * total * (1 - 1e-12));
  }
}

TEST_CASE("fixed fraction marking: frozen small cases") {
  const std::map<int, double> eta{{0, 5.0}, {1, 1.0}, {2, 3.0}};
  CHECK(mark_fixed_fraction(eta, 1.0 / 3.0) == std::vector<int>{0});
  CHECK(mark_fixed_fraction(eta, 0.5) == std::vector<int>{0, 2});
  CHECK(mark_fixed_fraction(eta, 1.0) == std::vector<int>{0, 1, 2});
  // ties resolve toward the smaller id
  const std::map<int, double> tied{{5, 2.0}, {7, 2.0}, {9, 2.0}};
  CHECK(mark_fixed_fraction(tied, 1.0 / 3.0) == std::vector<int>{5});
  CHECK(mark_fixed_fraction(tied, 0.6) == std::vector<int>{5, 7});
  CHECK_THROWS_AS(mark_fixed_fraction(eta, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(mark_fixed_fraction(eta, 1.5), std::invalid_argument);
  CHECK(mark_fixed_fraction({}, 0.5) == std::vector<int>{});
}

TEST_CASE("fixed fraction marking agrees with the sort oracle") {
  test_util::Lcg rng(4711);
  for (int trial = 0; trial < 200; ++trial) {
    const std::map<int, double> eta = random_eta(rng);
    const double fraction = rng.uniform(0.05, 1.0);
    const std::vector<int> marked = mark_fixed_fraction(eta, fraction);
    CHECK(marked == fixed_fraction_oracle(eta, fraction));
    const int expected = std::min(
        static_cast<int>(eta.size()),
        static_cast<int>(
            std::ceil(fraction * static_cast<double>(eta.size()))));
    CHECK(static_cast<int>(marked.size()) == expected);
  }
}
