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

#include "safem/driver.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <optional>
#include <stdexcept>

#include "safem/transfer.hpp"

namespace safem {

const char* to_string(Mode m) { return m == Mode::Afem ? "afem" : "safem"; }

const char* to_string(Smoother s) {
  switch (s) {
    case Smoother::Richardson: return "richardson";
    case Smoother::Cg: return "cg";
    default: return "gmres";
  }
}

namespace {

double cell_h1_diff_sq(const FeSpace& space, const std::vector<double>& u,
                       const ProblemSpec& problem, const QuadratureRule& quad,
                       int subdivisions, int cell_id) {
  const Mesh& mesh = space.mesh();
  const Cell& c = mesh.cell(cell_id);
  const Point o = mesh.cell_origin(c);
  const double ext = mesh.cell_extent(c);
  const double sub = static_cast<double>(subdivisions);
  const double scale = ext * ext / (sub * sub);
  double acc = 0.0;
  for (int sy = 0; sy < subdivisions; ++sy)
    for (int sx = 0; sx < subdivisions; ++sx)
      for (std::size_t q = 0; q < quad.points.size(); ++q) {
        const Point p{o.x + ext * (sx + quad.points[q].x) / sub,
                      o.y + ext * (sy + quad.points[q].y) / sub};
        const Point gh = space.evaluate_in_cell(u, cell_id, p).gradient;
        const Point ge = problem.exact_gradient(p);
        const double dx = ge.x - gh.x, dy = ge.y - gh.y;
        acc += quad.weights[q] * (dx * dx + dy * dy) * scale;
      }
  return acc;
}

}  // namespace

double error_h1(const FeSpace& space, const std::vector<double>& u,
                const ProblemSpec& problem, const QuadratureRule& quad,
                int subdivisions, Execution exec) {
  if (quad.points_per_direction < space.degree() + 2)
    throw std::invalid_argument("error_h1: quadrature must have at least degree+2 points");
  if (subdivisions < 1)
    throw std::invalid_argument("error_h1: subdivisions must be positive");
  const auto& active = space.mesh().active_cell_ids();
  std::vector<double> per_cell(active.size());
  parallel::for_each_index(static_cast<int>(active.size()), exec, [&](int k) {
    per_cell[k] =
        cell_h1_diff_sq(space, u, problem, quad, subdivisions, active[k]);
  });
  double total = 0.0;
  for (double v : per_cell) total += v;
  return std::sqrt(total);
}

double fe_diff_h1(const FeSpace& space, const std::vector<double>& a,
                  const std::vector<double>& b, const QuadratureRule& quad,
                  Execution exec) {
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  const auto& active = space.mesh().active_cell_ids();
  std::vector<double> per_cell(active.size());
  parallel::for_each_index(static_cast<int>(active.size()), exec, [&](int k) {
    const int id = active[k];
    double acc = 0.0;
    for (std::size_t q = 0; q < quad.points.size(); ++q) {
      const Cell& c = space.mesh().cell(id);
      const Point o = space.mesh().cell_origin(c);
      const double ext = space.mesh().cell_extent(c);
      const Point p{o.x + ext * quad.points[q].x, o.y + ext * quad.points[q].y};
      const Point g = space.evaluate_in_cell(diff, id, p).gradient;
      acc += quad.weights[q] * (g.x * g.x + g.y * g.y) * ext * ext;
    }
    per_cell[k] = acc;
  });
  double total = 0.0;
  for (double v : per_cell) total += v;
  return std::sqrt(total);
}

namespace {

struct ResolvedConfig {
  MarkingConfig marking;
  int assembly_quad;
  int error_quad;
};

ResolvedConfig resolve(const RunConfig& cfg) {
  ResolvedConfig r;
  if (cfg.marking) {
    r.marking = *cfg.marking;
  } else if (cfg.degree == 1) {
    r.marking = {MarkingConfig::Strategy::Dorfler, 0.3, 1.0 / 3.0};
  } else {
    r.marking = {MarkingConfig::Strategy::FixedFraction, 0.3, 1.0 / 3.0};
  }
  r.assembly_quad =
      cfg.assembly_quad_points > 0 ? cfg.assembly_quad_points : cfg.degree + 1;
  r.error_quad = cfg.error_quad_points > 0 ? cfg.error_quad_points
                                           : std::min(cfg.degree + 3, 6);
  return r;
}

void validate(const RunConfig& cfg) {
  if (cfg.degree < 1 || cfg.degree > 3)
    throw std::invalid_argument("run: degree must be 1, 2 or 3");
  if (cfg.cycles < 1)
    throw std::invalid_argument("run: need at least one cycle");
  if (cfg.mode == Mode::Safem && cfg.smoothing_steps < 1)
    throw std::invalid_argument("run: smoothing needs at least one step");
  if (cfg.exact_tol <= 0)
    throw std::invalid_argument("run: exact_tol must be positive");
  if (cfg.power_iterations < 1)
    throw std::invalid_argument("run: power_iterations must be positive");
}

std::vector<int> mark(const MarkingConfig& mc,
                      const std::map<int, double>& eta) {
  if (mc.strategy == MarkingConfig::Strategy::Dorfler)
    return mark_dorfler(eta, mc.theta);
  return mark_fixed_fraction(eta, mc.fraction);
}

SolveReport tight_solve(const SparseMatrix& A, const std::vector<double>& b,
                        std::vector<double>& x, bool nonsymmetric, double tol,
                        int gmres_restart) {
  const std::vector<double> inv_diag = jacobi_inverse_diagonal(A);
  SolveReport rep;
  if (nonsymmetric)
    rep = gmres(A, b, x, gmres_restart, SolveControl::tolerance_l2(tol, 200000),
                &inv_diag);
  else
    rep = cg(A, b, x, SolveControl::tolerance_l2(tol, 200000), &inv_diag);
  if (!rep.converged)
    throw std::runtime_error("tight solve did not reach the tolerance");
  return rep;
}

}  // namespace

RunResult run(const RunConfig& cfg) {
  validate(cfg);
  const ResolvedConfig rc = resolve(cfg);
  const ProblemSpec& problem = cfg.problem;
  const bool nonsym = problem.beta.x != 0.0 || problem.beta.y != 0.0;
  const QuadratureRule asm_quad = gauss_rule(rc.assembly_quad);
  const QuadratureRule err_quad = gauss_rule(rc.error_quad);
  const QuadratureRule diff_quad = gauss_rule(cfg.degree + 1);
  const QuadratureRule1D edge_quad = gauss_rule_1d(cfg.degree + 1);

  RunResult result;
  // Meshes of earlier cycles stay alive so spaces can refer to them;
  // deque growth never moves existing elements.
  std::deque<Mesh> meshes;
  meshes.push_back(problem.make_mesh(cfg.initial_resolution));
  std::optional<FeSpace> prev_space;
  std::vector<double> prev_u;        // conforming iterate of last cycle
  std::vector<double> prev_tight_u;  // diagnostics: conforming tight solution
  std::vector<double> prev_e;        // diagnostics: tight minus iterate

  for (int cycle = 1; cycle <= cfg.cycles; ++cycle) {
    const Mesh& mesh = meshes.back();
    FeSpace space(mesh, cfg.degree);
    ConstraintSet constraints = build_constraints(space, problem.boundary);
    LinearSystem sys = assemble_system(space, constraints, problem.beta,
                                       problem.source, asm_quad);

    const bool intermediate =
        cfg.mode == Mode::Safem && cycle > 1 && cycle < cfg.cycles;

    std::vector<double> x(space.dof_count(), 0.0);
    std::optional<Prolongation> P;
    if (cycle > 1) {
      P = build_prolongation(*prev_space, space);
      x = prolong(*P, prev_u);
    }
    // Constrained entries carry their condensed values during the solve;
    // the conforming values are restored afterwards.
    constraints.set_condensed(x);
    const std::vector<double> x0 = x;

    const auto t_start = std::chrono::steady_clock::now();
    SolveReport rep;
    double omega = 0.0;
    if (!intermediate) {
      rep = tight_solve(sys.A, sys.rhs, x, nonsym, cfg.exact_tol,
                        cfg.gmres_restart_exact);
    } else {
      switch (cfg.smoother) {
        case Smoother::Richardson: {
          std::int64_t power_cost = 0;
          const double rho = estimate_spectral_radius(
              sys.A, cfg.power_iterations, &power_cost);
          if (rho <= 0.0)
            throw std::runtime_error("run: spectral radius estimate failed");
          omega = cfg.omega_safety / rho;
          rep = richardson(sys.A, sys.rhs, x, omega, cfg.smoothing_steps);
          rep.matvecs += power_cost;
          break;
        }
        case Smoother::Cg:
          rep = cg(sys.A, sys.rhs, x, SolveControl::fixed(cfg.smoothing_steps));
          break;
        case Smoother::Gmres:
          rep = gmres(sys.A, sys.rhs, x,
                      std::max(cfg.gmres_restart_smooth, cfg.smoothing_steps),
                      SolveControl::fixed(cfg.smoothing_steps));
          break;
      }
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
            .count();

    std::vector<double> u = x;
    constraints.apply(u);
    const EstimatorResult est = jump_estimator(space, constraints, u, edge_quad);
    const double err = error_h1(space, u, problem, err_quad,
                                cfg.error_quad_subdivisions);

    CycleRecord rec;
    rec.cycle = cycle;
    rec.n_cells = mesh.n_active_cells();
    rec.n_dofs = space.dof_count();
    rec.mode = to_string(cfg.mode);
    rec.smoother = intermediate ? to_string(cfg.smoother) : "exact";
    rec.smoothing_steps = intermediate ? cfg.smoothing_steps : 0;
    rec.error_h1 = err;
    rec.estimator_J = est.global_J;
    rec.solver_iterations = rep.iterations;
    rec.matvec_count = rep.matvecs;
    rec.solve_seconds = seconds;

    if (cfg.diagnostic) {
      CycleDiagnostics diag;
      diag.cycle = cycle;
      if (!intermediate) {
        diag.error_h1_exact = err;
        diag.algebraic_h1 = 0.0;
        diag.estimator_J_exact = est.global_J;
        diag.decomposition_residual = 0.0;
        prev_tight_u = u;
        prev_e.assign(u.size(), 0.0);
      } else {
        // Tight reference solve from the same initial guess; its cost is
        // deliberately not added to the records.
        std::vector<double> xt = x0;
        tight_solve(sys.A, sys.rhs, xt, nonsym, cfg.exact_tol,
                    cfg.gmres_restart_exact);
        std::vector<double> ut = xt;
        constraints.apply(ut);
        const double err_exact = error_h1(space, ut, problem, err_quad,
                                          cfg.error_quad_subdivisions);
        const double alg = fe_diff_h1(space, ut, u, diff_quad);
        diag.error_h1_exact = err_exact;
        diag.algebraic_h1 = alg;
        diag.estimator_J_exact =
            jump_estimator(space, constraints, ut, edge_quad).global_J;
        const double t2 = err * err;
        diag.decomposition_residual =
            t2 > 0 ? std::abs(t2 - err_exact * err_exact - alg * alg) / t2 : 0.0;

        if (cfg.smoother == Smoother::Richardson && prev_space) {
          // Smoothing error recursion: with a = u_tight - I u_tight_prev
          // and the prolonged previous error, l smoothing steps give
          // e = M^l (a + I e_prev). Compare on the unconstrained dofs;
          // the constrained block of M is decoupled by construction.
          std::vector<double> v = prolong(*P, prev_tight_u);
          const std::vector<double> ie = prolong(*P, prev_e);
          for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = xt[i] - v[i] + ie[i];
          for (int s = 0; s < cfg.smoothing_steps; ++s) {
            const std::vector<double> av = sys.A.multiply(v);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= omega * av[i];
          }
          double num = 0.0, den = 0.0;
          for (std::size_t i = 0; i < v.size(); ++i) {
            if (constraints.is_constrained(static_cast<int>(i))) continue;
            const double e_i = xt[i] - x[i];
            const double d = e_i - v[i];
            num += d * d;
          }
          for (double b : sys.rhs) den += b * b;
          diag.propagation_residual =
              den > 0 ? std::sqrt(num) / std::sqrt(den) : std::sqrt(num);
        }

        prev_tight_u = ut;
        prev_e.resize(ut.size());
        for (std::size_t i = 0; i < ut.size(); ++i) prev_e[i] = ut[i] - u[i];
      }
      rec.has_estimator_J_exact = true;
      rec.estimator_J_exact = diag.estimator_J_exact;
      result.diagnostics.push_back(diag);
    }

    std::vector<int> marked;
    if (cycle < cfg.cycles) {
      marked = mark(rc.marking, est.per_cell);
      if (marked.empty())
        throw std::runtime_error("run: marking selected no cells");
      rec.marked_cells = static_cast<int>(marked.size());
    }
    if (cfg.on_cycle) cfg.on_cycle(rec, space, u, est, marked);
    if (cycle < cfg.cycles) meshes.push_back(mesh.refine(marked));

    result.records.push_back(rec);
    prev_space.emplace(std::move(space));
    prev_u = std::move(u);
  }
  return result;
}

std::vector<StagnationRecord> stagnation_probe(const RunConfig& base,
                                               int target_cycle,
                                               int max_steps) {
  validate(base);
  if (target_cycle < 1)
    throw std::invalid_argument("stagnation_probe: target cycle must be positive");
  if (max_steps < 1)
    throw std::invalid_argument("stagnation_probe: need at least one step");
  const ResolvedConfig rc = resolve(base);
  const ProblemSpec& problem = base.problem;
  const bool nonsym = problem.beta.x != 0.0 || problem.beta.y != 0.0;
  const QuadratureRule asm_quad = gauss_rule(rc.assembly_quad);
  const QuadratureRule1D edge_quad = gauss_rule_1d(base.degree + 1);

  std::deque<Mesh> meshes;
  meshes.push_back(problem.make_mesh(base.initial_resolution));
  std::optional<FeSpace> prev_space;
  std::vector<double> prev_u;

  // Tight cycles up to the target mesh.
  for (int cycle = 1; cycle < target_cycle; ++cycle) {
    const Mesh& mesh = meshes.back();
    FeSpace space(mesh, base.degree);
    ConstraintSet constraints = build_constraints(space, problem.boundary);
    LinearSystem sys = assemble_system(space, constraints, problem.beta,
                                       problem.source, asm_quad);
    std::vector<double> x(space.dof_count(), 0.0);
    if (cycle > 1) {
      const Prolongation P = build_prolongation(*prev_space, space);
      x = prolong(P, prev_u);
    }
    constraints.set_condensed(x);
    tight_solve(sys.A, sys.rhs, x, nonsym, base.exact_tol,
                base.gmres_restart_exact);
    std::vector<double> u = x;
    constraints.apply(u);
    const EstimatorResult est = jump_estimator(space, constraints, u, edge_quad);
    const std::vector<int> marked = mark(rc.marking, est.per_cell);
    if (marked.empty())
      throw std::runtime_error("stagnation_probe: marking selected no cells");
    meshes.push_back(mesh.refine(marked));
    prev_space.emplace(std::move(space));
    prev_u = std::move(u);
  }

  // One Richardson step at a time on the target mesh, recording the
  // residual and the estimator after each step.
  const Mesh& mesh = meshes.back();
  FeSpace space(mesh, base.degree);
  ConstraintSet constraints = build_constraints(space, problem.boundary);
  LinearSystem sys = assemble_system(space, constraints, problem.beta,
                                     problem.source, asm_quad);
  std::vector<double> x(space.dof_count(), 0.0);
  if (prev_space) {
    const Prolongation P = build_prolongation(*prev_space, space);
    x = prolong(P, prev_u);
  }
  constraints.set_condensed(x);
  const double rho =
      estimate_spectral_radius(sys.A, base.power_iterations);
  if (rho <= 0.0)
    throw std::runtime_error("stagnation_probe: spectral radius estimate failed");
  const double omega = base.omega_safety / rho;

  std::vector<StagnationRecord> records;
  for (int step = 1; step <= max_steps; ++step) {
    richardson(sys.A, sys.rhs, x, omega, 1);
    const std::vector<double> r = sys.A.multiply(x);
    double rn = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double d = sys.rhs[i] - r[i];
      rn += d * d;
    }
    std::vector<double> u = x;
    constraints.apply(u);
    const EstimatorResult est = jump_estimator(space, constraints, u, edge_quad);
    records.push_back({step, std::sqrt(rn), est.global_J});
  }
  return records;
}

std::vector<SuiteEntry> suite_configs(int cycles) {
  std::vector<SuiteEntry> out;
  const std::vector<std::pair<ProblemSpec, std::string>> problems = {
      {make_peak2d(), "peak2d"},
      {make_corner2d(), "corner2d"},
      {make_drift2d(1.0), "drift2d_b1"},
      {make_drift2d(10.0), "drift2d_b10"},
      {make_drift2d(50.0), "drift2d_b50"},
  };
  auto add = [&](const ProblemSpec& p, const std::string& stem, int degree,
                 Mode mode, Smoother sm, int steps) {
    RunConfig cfg;
    cfg.problem = p;
    cfg.degree = degree;
    cfg.cycles = cycles;
    cfg.mode = mode;
    cfg.smoother = sm;
    cfg.smoothing_steps = steps;
    std::string label = stem + "_" + to_string(mode);
    if (mode == Mode::Safem)
      label += std::string("_") + to_string(sm) + "_l" + std::to_string(steps);
    label += "_deg" + std::to_string(degree);
    out.push_back({std::move(cfg), std::move(label)});
  };

  for (const auto& [p, stem] : problems) {
    // drift problems stay at degree 1; the diffusion problems run 1 and 2.
    std::vector<int> degrees = {1};
    if (stem == "peak2d" || stem == "corner2d") degrees.push_back(2);
    for (int deg : degrees) {
      add(p, stem, deg, Mode::Afem, Smoother::Richardson, 0);
      for (Smoother sm :
           {Smoother::Richardson, Smoother::Cg, Smoother::Gmres})
        for (int steps = 1; steps <= 6; ++steps)
          add(p, stem, deg, Mode::Safem, sm, steps);
    }
  }
  // High-order probe of the singular problem.
  const ProblemSpec corner = make_corner2d();
  add(corner, "corner2d", 3, Mode::Afem, Smoother::Richardson, 0);
  add(corner, "corner2d", 3, Mode::Safem, Smoother::Richardson, 3);
  return out;
}

}  // namespace safem
