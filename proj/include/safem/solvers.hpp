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

#include <cstdint>
#include <vector>

#include "safem/sparse_matrix.hpp"

namespace safem {

// matvecs counts every multiplication by A the call performed, including
// the ones spent on residuals and convergence verification. It is the
// machine-independent cost measure used to compare solvers.
struct SolveReport {
  std::int64_t iterations = 0;
  double final_residual_norm = 0;
  bool converged = false;
  std::int64_t matvecs = 0;
};

// Two stopping modes: a fixed number of iterations with no convergence
// test (smoothing), or an absolute l2 tolerance on the residual b - Ax.
struct SolveControl {
  enum class Mode { FixedSteps, Tolerance };
  Mode mode = Mode::Tolerance;
  int steps = 0;
  double tolerance = 0;
  std::int64_t max_iterations = 100000;

  static SolveControl fixed(int steps);
  static SolveControl tolerance_l2(double tol, std::int64_t max_iterations = 100000);
};

// Damped Richardson iteration x <- x + omega (b - Ax), run for exactly
// `steps` steps and exactly `steps` products with A. The error is
// propagated by M = Id - omega A without ever forming M.
// final_residual_norm is the residual entering the last update; computing
// the outgoing residual would cost an extra product.
SolveReport richardson(const SparseMatrix& A, const std::vector<double>& b,
                       std::vector<double>& x, double omega, int steps);

// Conjugate gradients, optionally Jacobi preconditioned (pass the inverse
// diagonal). Requires symmetric positive definite A; throws
// std::runtime_error on detected indefiniteness. In tolerance mode a
// converged recursive residual is verified against the true residual
// before the method reports success.
SolveReport cg(const SparseMatrix& A, const std::vector<double>& b,
               std::vector<double>& x, const SolveControl& control,
               const std::vector<double>* jacobi_inverse_diagonal = nullptr);

// Restarted GMRES(m) with modified Gram-Schmidt, Givens rotations and
// optional right Jacobi preconditioning. A vanishing Arnoldi norm (happy
// breakdown) means the correction is exact in the current Krylov space and
// counts as convergence. If a restart makes no progress in tolerance mode
// the solver gives up with converged = false instead of looping.
SolveReport gmres(const SparseMatrix& A, const std::vector<double>& b,
                  std::vector<double>& x, int restart,
                  const SolveControl& control,
                  const std::vector<double>* jacobi_inverse_diagonal = nullptr);

// Largest eigenvalue estimate by power iteration with a fixed, seedless
// start vector (a hash of the index), used to pick the Richardson damping
// omega = safety / rho. Performs exactly `iterations` products with A,
// added to *matvecs if given.
double estimate_spectral_radius(const SparseMatrix& A, int iterations,
                                std::int64_t* matvecs = nullptr);

// Inverse diagonal for Jacobi preconditioning; throws on a zero diagonal
// entry.
std::vector<double> jacobi_inverse_diagonal(const SparseMatrix& A);

}  // namespace safem
