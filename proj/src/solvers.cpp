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

#include "safem/solvers.hpp"

#include <cmath>
#include <stdexcept>

namespace safem {

namespace {

// Reductions are kept serial: solver trajectories must not depend on the
// thread count.
double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

std::vector<double> residual(const SparseMatrix& A,
                             const std::vector<double>& b,
                             const std::vector<double>& x,
                             std::int64_t& matvecs) {
  std::vector<double> r = A.multiply(x);
  ++matvecs;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return r;
}

void check_sizes(const SparseMatrix& A, const std::vector<double>& b,
                 const std::vector<double>& x) {
  if (static_cast<int>(b.size()) != A.rows() ||
      static_cast<int>(x.size()) != A.rows())
    throw std::invalid_argument("solver: vector size does not match the matrix");
}

std::vector<double> precondition(const std::vector<double>* inv_diag,
                                 const std::vector<double>& r) {
  if (!inv_diag) return r;
  std::vector<double> z(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) z[i] = (*inv_diag)[i] * r[i];
  return z;
}

}  // namespace

SolveControl SolveControl::fixed(int steps) {
  SolveControl c;
  c.mode = Mode::FixedSteps;
  c.steps = steps;
  return c;
}

SolveControl SolveControl::tolerance_l2(double tol, std::int64_t max_iterations) {
  SolveControl c;
  c.mode = Mode::Tolerance;
  c.tolerance = tol;
  c.max_iterations = max_iterations;
  return c;
}

SolveReport richardson(const SparseMatrix& A, const std::vector<double>& b,
                       std::vector<double>& x, double omega, int steps) {
  check_sizes(A, b, x);
  if (steps < 0) throw std::invalid_argument("richardson: negative step count");
  SolveReport rep;
  std::vector<double> r;
  for (int k = 0; k < steps; ++k) {
    r = residual(A, b, x, rep.matvecs);
    rep.final_residual_norm = norm(r);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += omega * r[i];
    ++rep.iterations;
  }
  return rep;
}

SolveReport cg(const SparseMatrix& A, const std::vector<double>& b,
               std::vector<double>& x, const SolveControl& control,
               const std::vector<double>* inv_diag) {
  check_sizes(A, b, x);
  SolveReport rep;
  std::vector<double> r = residual(A, b, x, rep.matvecs);
  double rnorm = norm(r);
  rep.final_residual_norm = rnorm;
  const bool fixed = control.mode == SolveControl::Mode::FixedSteps;
  if (!fixed && rnorm <= control.tolerance) {
    rep.converged = true;
    return rep;
  }
  if (rnorm == 0.0) {
    rep.converged = true;
    return rep;
  }

  std::vector<double> z = precondition(inv_diag, r);
  std::vector<double> p = z;
  double rz = dot(r, z);
  std::vector<double> q;
  const std::int64_t limit = fixed ? control.steps : control.max_iterations;

  for (std::int64_t it = 1; it <= limit; ++it) {
    q = A.multiply(p);
    ++rep.matvecs;
    const double pq = dot(p, q);
    if (pq <= 0.0)
      throw std::runtime_error("cg: matrix is not positive definite");
    const double alpha = rz / pq;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += alpha * p[i];
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= alpha * q[i];
    rep.iterations = it;
    rnorm = norm(r);
    rep.final_residual_norm = rnorm;

    if (!fixed && rnorm <= control.tolerance) {
      // The recursive residual drifts from the true one; accept only after
      // verification and otherwise continue from the recomputed residual.
      std::vector<double> rt = residual(A, b, x, rep.matvecs);
      const double tnorm = norm(rt);
      rep.final_residual_norm = tnorm;
      if (tnorm <= control.tolerance) {
        rep.converged = true;
        return rep;
      }
      r = std::move(rt);
      z = precondition(inv_diag, r);
      p = z;
      rz = dot(r, z);
      continue;
    }
    if (rz == 0.0) break;
    z = precondition(inv_diag, r);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = z[i] + beta * p[i];
  }
  return rep;
}

SolveReport gmres(const SparseMatrix& A, const std::vector<double>& b,
                  std::vector<double>& x, int restart,
                  const SolveControl& control,
                  const std::vector<double>* inv_diag) {
  check_sizes(A, b, x);
  if (restart < 1) throw std::invalid_argument("gmres: restart must be positive");
  SolveReport rep;
  const bool fixed = control.mode == SolveControl::Mode::FixedSteps;
  const std::int64_t limit = fixed ? control.steps : control.max_iterations;
  const int n = A.rows();
  double previous_cycle_residual = -1.0;

  while (true) {
    std::vector<double> r = residual(A, b, x, rep.matvecs);
    const double beta = norm(r);
    rep.final_residual_norm = beta;
    if (!fixed && beta <= control.tolerance) {
      rep.converged = true;
      return rep;
    }
    if (beta == 0.0) {
      rep.converged = true;
      return rep;
    }
    if (rep.iterations >= limit) return rep;
    if (!fixed && previous_cycle_residual >= 0.0 &&
        beta >= previous_cycle_residual * (1.0 - 1e-12)) {
      // A full restart cycle made no progress; report failure instead of
      // spinning until max_iterations.
      return rep;
    }
    previous_cycle_residual = beta;

    const int m = restart;
    std::vector<std::vector<double>> V;
    V.reserve(m + 1);
    {
      std::vector<double> v0(r);
      for (double& vi : v0) vi /= beta;
      V.push_back(std::move(v0));
    }
    std::vector<std::vector<double>> H;  // H[j] holds column j (j+2 entries)
    std::vector<double> cs, sn, g;
    g.push_back(beta);
    bool happy = false;
    int j_end = 0;

    for (int j = 0; j < m; ++j) {
      std::vector<double> w = precondition(inv_diag, V[j]);
      w = A.multiply(w);
      ++rep.matvecs;
      std::vector<double> h(j + 2, 0.0);
      for (int i = 0; i <= j; ++i) {
        h[i] = dot(w, V[i]);
        for (int kk = 0; kk < n; ++kk) w[kk] -= h[i] * V[i][kk];
      }
      h[j + 1] = norm(w);
      const bool breakdown = h[j + 1] <= 1e-14 * beta;
      if (!breakdown) {
        std::vector<double> v(w);
        for (double& vi : v) vi /= h[j + 1];
        V.push_back(std::move(v));
      }
      // Apply the accumulated Givens rotations, then zero h[j+1].
      for (int i = 0; i < j; ++i) {
        const double tmp = cs[i] * h[i] + sn[i] * h[i + 1];
        h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
        h[i] = tmp;
      }
      double c = 1.0, s = 0.0;
      const double denom = std::hypot(h[j], h[j + 1]);
      if (denom > 0.0) {
        c = h[j] / denom;
        s = h[j + 1] / denom;
      }
      cs.push_back(c);
      sn.push_back(s);
      h[j] = denom;
      h[j + 1] = 0.0;
      H.push_back(std::move(h));
      const double gj = g[j];
      g.push_back(-s * gj);
      g[j] = c * gj;
      ++rep.iterations;
      j_end = j + 1;
      const double res_est = std::abs(g[j + 1]);
      rep.final_residual_norm = res_est;
      if (breakdown) {
        happy = true;
        break;
      }
      if (!fixed && res_est <= control.tolerance) break;
      if (fixed && rep.iterations >= limit) break;
    }

    // y = R^{-1} g, correction = M (V y).
    std::vector<double> y(j_end, 0.0);
    for (int i = j_end - 1; i >= 0; --i) {
      double s = g[i];
      for (int k = i + 1; k < j_end; ++k) s -= H[k][i] * y[k];
      const double rii = H[i][i];
      y[i] = rii != 0.0 ? s / rii : 0.0;
    }
    std::vector<double> corr(n, 0.0);
    for (int k = 0; k < j_end; ++k)
      for (int i = 0; i < n; ++i) corr[i] += y[k] * V[k][i];
    corr = precondition(inv_diag, corr);
    for (int i = 0; i < n; ++i) x[i] += corr[i];

    if (happy) {
      rep.converged = true;
      return rep;
    }
    if (fixed && rep.iterations >= limit) return rep;
    // Tolerance mode loops back, recomputes the true residual and either
    // stops, restarts, or reports stagnation.
  }
}

double estimate_spectral_radius(const SparseMatrix& A, int iterations,
                                std::int64_t* matvecs) {
  if (iterations < 1)
    throw std::invalid_argument("estimate_spectral_radius: need at least one iteration");
  const int n = A.rows();
  if (n == 0) return 0.0;
  // Seedless deterministic start vector with components in [1, 2): a
  // multiplicative hash of the index. No state, no configuration.
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) {
    const std::uint32_t h = static_cast<std::uint32_t>(i + 1) * 2654435761u;
    v[i] = 1.0 + static_cast<double>(h >> 22) / 1024.0;
  }
  double nv = norm(v);
  for (double& vi : v) vi /= nv;
  double lambda = 0.0;
  std::vector<double> w;
  for (int k = 0; k < iterations; ++k) {
    w = A.multiply(v);
    if (matvecs) ++(*matvecs);
    lambda = dot(v, w);
    const double nw = norm(w);
    if (nw == 0.0) return 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) v[i] = w[i] / nw;
  }
  return lambda;
}

std::vector<double> jacobi_inverse_diagonal(const SparseMatrix& A) {
  std::vector<double> d = A.diagonal();
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] == 0.0)
      throw std::runtime_error("jacobi: zero diagonal entry");
    d[i] = 1.0 / d[i];
  }
  return d;
}

}  // namespace safem
