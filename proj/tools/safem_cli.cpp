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

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "safem/driver.hpp"
#include "safem/problems.hpp"
#include "safem/report.hpp"
#include "safem/vtk_io.hpp"

using namespace safem;

namespace {

namespace fs = std::filesystem;

int flag_error(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  return 2;
}

struct Options {
  std::string problem = "peak2d";
  double beta = 1.0;
  bool beta_given = false;
  int degree = 1;
  int cycles = 10;
  std::string mode = "afem";
  std::string smoother = "richardson";
  int steps = 3;
  std::string marking = "auto";
  double theta = 0.3;
  double fraction = 1.0 / 3.0;
  int initial_subdivisions = 0;
  double tol = 1e-12;
  bool diagnostic = false;
  bool vtk = false;
  std::string output_dir = "out";
  // stagnation only
  int cycle = 3;
  int max_steps = 30;
};

// Fills config and stem; returns 0 or the exit code of a flag error.
int build_config(const Options& o, RunConfig& cfg, std::string& stem) {
  if (o.problem == "peak2d") {
    cfg.problem = make_peak2d();
  } else if (o.problem == "corner2d") {
    cfg.problem = make_corner2d();
  } else if (o.problem == "drift2d") {
    if (o.beta == 0.0 || std::abs(o.beta) > 500.0)
      return flag_error("--beta must be nonzero and at most 500 in magnitude");
    cfg.problem = make_drift2d(o.beta);
  } else {
    return flag_error("--problem must be peak2d, corner2d or drift2d");
  }
  if (o.beta_given && o.problem != "drift2d")
    return flag_error("--beta only applies to --problem drift2d");

  if (o.degree < 1 || o.degree > 3)
    return flag_error("--degree must be 1, 2 or 3");
  cfg.degree = o.degree;
  if (o.cycles < 1) return flag_error("--cycles must be at least 1");
  cfg.cycles = o.cycles;

  if (o.mode == "afem") {
    cfg.mode = Mode::Afem;
  } else if (o.mode == "safem") {
    cfg.mode = Mode::Safem;
  } else {
    return flag_error("--mode must be afem or safem");
  }
  if (o.smoother == "richardson") {
    cfg.smoother = Smoother::Richardson;
  } else if (o.smoother == "cg") {
    cfg.smoother = Smoother::Cg;
  } else if (o.smoother == "gmres") {
    cfg.smoother = Smoother::Gmres;
  } else {
    return flag_error("--smoother must be richardson, cg or gmres");
  }
  if (cfg.mode == Mode::Safem && o.steps < 1)
    return flag_error("--steps must be at least 1 in safem mode");
  cfg.smoothing_steps = o.steps;

  if (o.marking == "dorfler") {
    if (!(o.theta > 0.0 && o.theta <= 1.0))
      return flag_error("--theta must lie in (0, 1]");
    cfg.marking = MarkingConfig{MarkingConfig::Strategy::Dorfler, o.theta,
                                o.fraction};
  } else if (o.marking == "fixed-fraction") {
    if (!(o.fraction > 0.0 && o.fraction <= 1.0))
      return flag_error("--fraction must lie in (0, 1]");
    cfg.marking = MarkingConfig{MarkingConfig::Strategy::FixedFraction,
                                o.theta, o.fraction};
  } else if (o.marking != "auto") {
    return flag_error("--marking must be auto, dorfler or fixed-fraction");
  }

  if (o.initial_subdivisions < 0)
    return flag_error("--initial-subdivisions must not be negative");
  cfg.initial_resolution = o.initial_subdivisions;
  if (o.tol <= 0.0) return flag_error("--tol must be positive");
  cfg.exact_tol = o.tol;
  cfg.diagnostic = o.diagnostic;

  stem = o.problem;
  if (o.problem == "drift2d") stem += "_b" + format_double(o.beta);
  stem += std::string("_") + to_string(cfg.mode);
  if (cfg.mode == Mode::Safem)
    stem += std::string("_") + to_string(cfg.smoother) + "_l" +
            std::to_string(cfg.smoothing_steps);
  stem += "_deg" + std::to_string(cfg.degree);
  return 0;
}

bool equal_cycle(const CycleRecord& a, const CycleRecord& b) {
  return a.cycle == b.cycle && a.n_cells == b.n_cells && a.n_dofs == b.n_dofs &&
         a.mode == b.mode && a.smoother == b.smoother &&
         a.smoothing_steps == b.smoothing_steps && a.error_h1 == b.error_h1 &&
         a.estimator_J == b.estimator_J &&
         a.has_estimator_J_exact == b.has_estimator_J_exact &&
         (!a.has_estimator_J_exact ||
          a.estimator_J_exact == b.estimator_J_exact) &&
         a.solver_iterations == b.solver_iterations &&
         a.matvec_count == b.matvec_count &&
         a.solve_seconds == b.solve_seconds &&
         a.marked_cells == b.marked_cells;
}

// Writes the per-cycle table and proves it parses back losslessly.
int emit_cycle_csv(const std::string& path,
                   const std::vector<CycleRecord>& records) {
  write_cycle_csv(path, records);
  const std::vector<CycleRecord> back = read_cycle_csv(path);
  if (back.size() != records.size()) {
    std::cerr << "error: " << path << ": read-back size mismatch\n";
    return 1;
  }
  for (std::size_t i = 0; i < records.size(); ++i)
    if (!equal_cycle(records[i], back[i])) {
      std::cerr << "error: " << path << ": read-back mismatch in row "
                << i + 1 << "\n";
      return 1;
    }
  return 0;
}

int cmd_run(const Options& o) {
  RunConfig cfg;
  std::string stem;
  if (int rc = build_config(o, cfg, stem)) return rc;
  fs::create_directories(o.output_dir);

  if (o.vtk) {
    cfg.on_cycle = [&](const CycleRecord& rec, const FeSpace& space,
                       const std::vector<double>& u, const EstimatorResult& est,
                       const std::vector<int>& marked) {
      char suffix[32];
      std::snprintf(suffix, sizeof suffix, "_cycle%02d.vtk", rec.cycle);
      write_vtk((fs::path(o.output_dir) / (stem + suffix)).string(), space, u,
                &est, &marked);
    };
  }

  RunResult result;
  try {
    result = run(cfg);
  } catch (const std::invalid_argument& e) {
    return flag_error(e.what());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  for (const CycleRecord& r : result.records)
    std::printf("cycle %2d  cells %6d  dofs %8lld  error_h1 %-12.5g J %-12.5g"
                " matvecs %lld\n",
                r.cycle, r.n_cells, static_cast<long long>(r.n_dofs),
                r.error_h1, r.estimator_J,
                static_cast<long long>(r.matvec_count));

  const std::string path = (fs::path(o.output_dir) / (stem + ".csv")).string();
  if (int rc = emit_cycle_csv(path, result.records)) return rc;
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_stagnation(const Options& o) {
  RunConfig cfg;
  std::string stem;
  if (int rc = build_config(o, cfg, stem)) return rc;
  if (o.cycle < 1) return flag_error("--cycle must be at least 1");
  if (o.max_steps < 1) return flag_error("--max-steps must be at least 1");
  fs::create_directories(o.output_dir);

  std::vector<StagnationRecord> records;
  try {
    records = stagnation_probe(cfg, o.cycle, o.max_steps);
  } catch (const std::invalid_argument& e) {
    return flag_error(e.what());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  char suffix[48];
  std::snprintf(suffix, sizeof suffix, "_stagnation_cycle%d.csv", o.cycle);
  const std::string path =
      (fs::path(o.output_dir) / (stem + suffix)).string();
  write_stagnation_csv(path, records);
  const std::vector<StagnationRecord> back = read_stagnation_csv(path);
  if (back.size() != records.size()) {
    std::cerr << "error: " << path << ": read-back size mismatch\n";
    return 1;
  }
  for (std::size_t i = 0; i < records.size(); ++i)
    if (back[i].step != records[i].step ||
        back[i].residual_l2 != records[i].residual_l2 ||
        back[i].estimator_J != records[i].estimator_J) {
      std::cerr << "error: " << path << ": read-back mismatch in row "
                << i + 1 << "\n";
      return 1;
    }
  std::printf("wrote %s (%d steps)\n", path.c_str(),
              static_cast<int>(records.size()));
  return 0;
}

int suite_threads() {
  if (const char* s = std::getenv("SAFEM_THREADS")) {
    const int n = std::atoi(s);
    if (n > 0) return n;
  }
  return 1;
}

int cmd_suite(int cycles, const std::string& output_dir) {
  if (cycles < 1) return flag_error("--cycles must be at least 1");
  fs::create_directories(output_dir);
  const std::vector<SuiteEntry> entries = suite_configs(cycles);
  std::vector<SuiteSummaryRow> rows(entries.size());
  std::vector<std::string> errors(entries.size());

  std::atomic<std::size_t> next{0};
  std::mutex io_mutex;
  auto worker = [&] {
    for (std::size_t k = next.fetch_add(1); k < entries.size();
         k = next.fetch_add(1)) {
      const SuiteEntry& e = entries[k];
      try {
        const auto t0 = std::chrono::steady_clock::now();
        const RunResult res = run(e.config);
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          t0)
                .count();
        const std::string path =
            (fs::path(output_dir) / (e.label + ".csv")).string();
        if (emit_cycle_csv(path, res.records)) {
          errors[k] = e.label + ": read-back failed";
          continue;
        }

        SuiteSummaryRow& row = rows[k];
        row.label = e.label;
        row.problem = e.config.problem.name;
        row.degree = e.config.degree;
        row.mode = to_string(e.config.mode);
        row.smoother = e.config.mode == Mode::Safem
                           ? to_string(e.config.smoother)
                           : "exact";
        row.smoothing_steps =
            e.config.mode == Mode::Safem ? e.config.smoothing_steps : 0;
        row.cycles = cycles;
        row.final_dofs = res.records.back().n_dofs;
        row.final_error_h1 = res.records.back().error_h1;
        row.final_estimator_J = res.records.back().estimator_J;
        row.total_matvecs = 0;
        row.intermediate_matvecs = 0;
        for (const CycleRecord& r : res.records) {
          row.total_matvecs += r.matvec_count;
          if (r.cycle > 1 && r.cycle < cycles)
            row.intermediate_matvecs += r.matvec_count;
        }
        row.wall_seconds = seconds;

        std::lock_guard<std::mutex> lock(io_mutex);
        std::printf("done %-42s error_h1 %-12.5g %8.2fs\n", e.label.c_str(),
                    row.final_error_h1, seconds);
      } catch (const std::exception& ex) {
        errors[k] = e.label + ": " + ex.what();
      }
    }
  };

  const int n_threads =
      std::min<int>(suite_threads(), static_cast<int>(entries.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  bool failed = false;
  for (const std::string& err : errors)
    if (!err.empty()) {
      std::cerr << "error: " << err << "\n";
      failed = true;
    }
  if (failed) return 1;

  const std::string summary =
      (fs::path(output_dir) / "suite_summary.csv").string();
  write_suite_summary(summary, rows);
  std::printf("wrote %s (%d configurations)\n", summary.c_str(),
              static_cast<int>(rows.size()));
  return 0;
}

void add_problem_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--problem", o.problem,
                  "benchmark problem: peak2d, corner2d or drift2d");
  auto* beta = cmd->add_option("--beta", o.beta,
                               "drift coefficient (drift2d only)");
  cmd->parse_complete_callback([&o, beta] { o.beta_given = beta->count() > 0; });
  cmd->add_option("--degree", o.degree, "polynomial degree 1..3");
  cmd->add_option("--marking", o.marking,
                  "marking strategy: auto, dorfler or fixed-fraction");
  cmd->add_option("--theta", o.theta, "bulk fraction for dorfler marking");
  cmd->add_option("--fraction", o.fraction,
                  "cell fraction for fixed-fraction marking");
  cmd->add_option("--initial-subdivisions", o.initial_subdivisions,
                  "initial mesh resolution (cells per direction for the unit "
                  "square, uniform refinement rounds for corner2d), 0 = "
                  "problem default");
  cmd->add_option("--tol", o.tol,
                  "absolute residual tolerance of tight solves");
  cmd->add_option("--output-dir", o.output_dir, "directory for output files");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive FEM driver: classical and smoothed refinement loops"};
  app.require_subcommand(1);

  Options o;
  CLI::App* run_cmd =
      app.add_subcommand("run", "one adaptive loop, per-cycle CSV output");
  add_problem_flags(run_cmd, o);
  run_cmd->add_option("--cycles", o.cycles, "number of adaptive cycles");
  run_cmd->add_option("--mode", o.mode, "afem or safem");
  run_cmd->add_option("--smoother", o.smoother,
                      "intermediate-cycle smoother: richardson, cg or gmres");
  run_cmd->add_option("--steps", o.steps, "smoothing steps per cycle");
  run_cmd->add_flag("--diagnostic", o.diagnostic,
                    "add tight-solve reference values to every cycle");
  run_cmd->add_flag("--vtk", o.vtk, "write a VTK file per cycle");

  Options so;
  CLI::App* stag_cmd = app.add_subcommand(
      "stagnation", "step-by-step richardson probe on one mesh");
  add_problem_flags(stag_cmd, so);
  stag_cmd->add_option("--cycle", so.cycle, "adaptive cycle to probe");
  stag_cmd->add_option("--max-steps", so.max_steps,
                       "number of richardson steps to record");

  int suite_cycles = 10;
  std::string suite_dir = "out";
  CLI::App* suite_cmd = app.add_subcommand(
      "suite", "full experiment matrix, one CSV per configuration");
  suite_cmd->add_option("--cycles", suite_cycles,
                        "number of adaptive cycles per configuration");
  suite_cmd->add_option("--output-dir", suite_dir,
                        "directory for output files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (run_cmd->parsed()) return cmd_run(o);
  if (stag_cmd->parsed()) return cmd_stagnation(so);
  return cmd_suite(suite_cycles, suite_dir);
}
