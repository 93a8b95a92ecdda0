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
#include <optional>
#include <string>
#include <vector>

#include "safem/assembly.hpp"
#include "safem/estimator.hpp"
#include "safem/marking.hpp"
#include "safem/problems.hpp"
#include "safem/quadrature.hpp"
#include "safem/solvers.hpp"

namespace safem {

// H1 seminorm of (exact - u_h), integrated cell by cell with the given
// tensor rule applied on a subdivisions x subdivisions composite grid per
// cell. Requires at least degree+2 quadrature points per direction. u must
// be conforming (constraints applied). The cell sums are accumulated
// serially in cell-id order.
double error_h1(const FeSpace& space, const std::vector<double>& u,
                const ProblemSpec& problem, const QuadratureRule& quad,
                int subdivisions = 1, Execution exec = Execution::Parallel);

// H1 seminorm of the difference of two coefficient vectors on the same
// space. Exact up to roundoff once the rule has degree+1 points per
// direction.
double fe_diff_h1(const FeSpace& space, const std::vector<double>& a,
                  const std::vector<double>& b, const QuadratureRule& quad,
                  Execution exec = Execution::Parallel);

enum class Mode { Afem, Safem };
enum class Smoother { Richardson, Cg, Gmres };

struct MarkingConfig {
  enum class Strategy { Dorfler, FixedFraction };
  Strategy strategy = Strategy::Dorfler;
  double theta = 0.3;
  double fraction = 1.0 / 3.0;
};

// One row of the per-cycle output. estimator_J_exact is only filled in
// diagnostic runs (empty CSV field otherwise). matvec_count includes the
// power-iteration products used to calibrate Richardson.
struct CycleRecord {
  int cycle = 0;
  int n_cells = 0;
  std::int64_t n_dofs = 0;
  std::string mode;
  std::string smoother;
  int smoothing_steps = 0;
  double error_h1 = 0;
  double estimator_J = 0;
  bool has_estimator_J_exact = false;
  double estimator_J_exact = 0;
  std::int64_t solver_iterations = 0;
  std::int64_t matvec_count = 0;
  double solve_seconds = 0;
  int marked_cells = 0;
};

struct RunConfig {
  ProblemSpec problem;
  int degree = 1;
  int cycles = 10;
  Mode mode = Mode::Afem;
  Smoother smoother = Smoother::Richardson;
  int smoothing_steps = 3;
  // Default marking depends on the degree: Doerfler theta = 0.3 for
  // degree 1, fixed fraction 1/3 otherwise. Set marking to override.
  std::optional<MarkingConfig> marking;
  double exact_tol = 1e-12;
  int initial_resolution = 0;  // 0 = problem default
  int power_iterations = 20;
  double omega_safety = 1.0;
  int gmres_restart_smooth = 30;
  int gmres_restart_exact = 50;
  // 0 = degree + 1 points per direction.
  int assembly_quad_points = 0;
  // 0 = min(degree + 3, 6) points per direction.
  int error_quad_points = 0;
  int error_quad_subdivisions = 2;
  // Adds the exactly-solved reference quantities to every cycle
  // (additional tight solves; their cost is not counted).
  bool diagnostic = false;
  // Called after every cycle with the finished record, the space, the
  // conforming iterate, the estimator, and the marked cells (empty on the
  // last cycle). References are only valid during the call. Used for
  // per-cycle file output.
  std::function<void(const CycleRecord&, const FeSpace&,
                     const std::vector<double>&, const EstimatorResult&,
                     const std::vector<int>&)>
      on_cycle;
};

// Exact-solve reference quantities of one cycle (diagnostic runs only).
// With u_h the tight solution and u^l the smoothed iterate on the same
// mesh, the total error splits orthogonally (beta = 0, Galerkin):
//   |u - u^l|^2 = |u - u_h|^2 + |u_h - u^l|^2.
// decomposition_residual is the relative defect of that identity.
// propagation_residual checks the smoothing error recursion
//   e_{k+1} = M^l (a_{k+1} + I e_k)
// on the unconstrained dofs (Richardson smoothing only, -1 otherwise).
struct CycleDiagnostics {
  int cycle = 0;
  double error_h1_exact = 0;
  double algebraic_h1 = 0;
  double estimator_J_exact = 0;
  double decomposition_residual = -1;
  double propagation_residual = -1;
};

struct RunResult {
  std::vector<CycleRecord> records;
  std::vector<CycleDiagnostics> diagnostics;
};

// The adaptive loop: solve, estimate, mark, refine. In Mode::Safem only
// the first and last cycle solve to exact_tol; intermediate cycles
// prolongate the previous iterate and apply smoothing_steps steps of the
// configured smoother. Throws std::runtime_error if marking comes back
// empty before the last cycle or a tight solve fails to converge.
RunResult run(const RunConfig& config);

struct StagnationRecord {
  int step = 0;
  double residual_l2 = 0;
  double estimator_J = 0;
};

// Runs tight cycles up to target_cycle - 1 refinements, prolongates onto
// the final mesh, then applies Richardson one step at a time, recording
// the residual norm and the estimator after every step.
std::vector<StagnationRecord> stagnation_probe(const RunConfig& base,
                                               int target_cycle,
                                               int max_steps);

struct SuiteEntry {
  RunConfig config;
  std::string label;
};

// The full experiment matrix: every problem and degree in afem mode plus
// safem with each smoother at steps 1..6. drift2d runs at degree 1 with
// beta in {1, 10, 50}; corner2d adds a degree-3 Richardson configuration.
std::vector<SuiteEntry> suite_configs(int cycles);

const char* to_string(Mode m);
const char* to_string(Smoother s);

}  // namespace safem
