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

#include <string>
#include <vector>

#include "safem/driver.hpp"

namespace safem {

// All floating point fields are printed with %.17g so that reading a file
// back reproduces the written doubles bit for bit.
inline constexpr const char* kCycleCsvHeader =
    "cycle,n_cells,n_dofs,mode,smoother,smoothing_steps,error_h1,"
    "estimator_J,estimator_J_exact,solver_iterations,matvec_count,"
    "solve_seconds,marked_cells";

void write_cycle_csv(const std::string& path,
                     const std::vector<CycleRecord>& records);
// Throws std::runtime_error on malformed files.
std::vector<CycleRecord> read_cycle_csv(const std::string& path);

inline constexpr const char* kStagnationCsvHeader =
    "step,residual_l2,estimator_J";

void write_stagnation_csv(const std::string& path,
                          const std::vector<StagnationRecord>& records);
std::vector<StagnationRecord> read_stagnation_csv(const std::string& path);

// One line per suite run with the end-of-run quantities used in the
// comparison tables.
struct SuiteSummaryRow {
  std::string label;
  std::string problem;
  int degree = 0;
  std::string mode;
  std::string smoother;
  int smoothing_steps = 0;
  int cycles = 0;
  std::int64_t final_dofs = 0;
  double final_error_h1 = 0;
  double final_estimator_J = 0;
  std::int64_t total_matvecs = 0;
  std::int64_t intermediate_matvecs = 0;
  double wall_seconds = 0;
};

void write_suite_summary(const std::string& path,
                         const std::vector<SuiteSummaryRow>& rows);

std::string format_double(double v);

}  // namespace safem
