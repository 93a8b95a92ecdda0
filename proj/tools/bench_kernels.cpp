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

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "safem/assembly.hpp"
#include "safem/driver.hpp"
#include "safem/estimator.hpp"
#include "safem/fe_space.hpp"
#include "safem/problems.hpp"
#include "safem/quadrature.hpp"

using namespace safem;

namespace {

// Serial versus OpenMP timings of the per-cell kernels on one shared
// locally refined state, biquadratic elements, plenty of hanging nodes.

struct State {
  ProblemSpec problem = make_peak2d();
  Mesh mesh;
  FeSpace space;
  ConstraintSet constraints;
  LinearSystem sys;
  std::vector<double> u;

  State() : mesh(build_mesh()), space(mesh, 2),
            constraints(build_constraints(space, problem.boundary)),
            sys(assemble_system(space, constraints, Point{0.0, 0.0},
                                [](Point) { return 1.0; }, gauss_rule(3))),
            u(space.dof_count()) {
    std::uint64_t s = 12345;
    for (double& x : u) {
      s = s * 6364136223846793005ull + 1442695040888963407ull;
      x = static_cast<double>(s >> 11) * 0x1p-53 - 0.5;
    }
    constraints.apply(u);
  }

  static Mesh build_mesh() {
    Mesh m = Mesh::unit_square(16);
    for (int round = 0; round < 4; ++round) {
      const auto& active = m.active_cell_ids();
      std::vector<int> marked;
      for (std::size_t i = 0; i < active.size(); i += 3)
        marked.push_back(active[i]);
      m = m.refine(marked);
    }
    return m;
  }
};

const State& state() {
  static const State s;
  return s;
}

void bench_spmv(benchmark::State& bs, Execution exec) {
  const State& s = state();
  for (auto _ : bs) {
    std::vector<double> y = s.sys.A.multiply(s.u, exec);
    benchmark::DoNotOptimize(y.data());
  }
  bs.SetItemsProcessed(bs.iterations() * s.sys.A.rows());
}

void bench_local_matrices(benchmark::State& bs, Execution exec) {
  const State& s = state();
  for (auto _ : bs) {
    auto loc = local_matrices(s.space, Point{0.0, 0.0},
                              [](Point) { return 1.0; }, gauss_rule(3), exec);
    benchmark::DoNotOptimize(loc.data());
  }
  bs.SetItemsProcessed(bs.iterations() * s.mesh.n_active_cells());
}

void bench_assemble(benchmark::State& bs, Execution exec) {
  const State& s = state();
  for (auto _ : bs) {
    LinearSystem sys =
        assemble_system(s.space, s.constraints, Point{0.0, 0.0},
                        [](Point) { return 1.0; }, gauss_rule(3), exec);
    benchmark::DoNotOptimize(sys.rhs.data());
  }
}

void bench_estimator(benchmark::State& bs, Execution exec) {
  const State& s = state();
  for (auto _ : bs) {
    EstimatorResult est =
        jump_estimator(s.space, s.constraints, s.u, gauss_rule_1d(3), exec);
    benchmark::DoNotOptimize(est.global_J);
  }
}

void bench_error(benchmark::State& bs, Execution exec) {
  const State& s = state();
  for (auto _ : bs) {
    double e = error_h1(s.space, s.u, s.problem, gauss_rule(4), 2, exec);
    benchmark::DoNotOptimize(e);
  }
}

}  // namespace

BENCHMARK_CAPTURE(bench_spmv, serial, Execution::Serial);
BENCHMARK_CAPTURE(bench_spmv, parallel, Execution::Parallel);
BENCHMARK_CAPTURE(bench_local_matrices, serial, Execution::Serial);
BENCHMARK_CAPTURE(bench_local_matrices, parallel, Execution::Parallel);
BENCHMARK_CAPTURE(bench_assemble, serial, Execution::Serial);
BENCHMARK_CAPTURE(bench_assemble, parallel, Execution::Parallel);
BENCHMARK_CAPTURE(bench_estimator, serial, Execution::Serial);
BENCHMARK_CAPTURE(bench_estimator, parallel, Execution::Parallel);
BENCHMARK_CAPTURE(bench_error, serial, Execution::Serial);
BENCHMARK_CAPTURE(bench_error, parallel, Execution::Parallel);

BENCHMARK_MAIN();
