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

#include "safem/report.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace safem {

std::string format_double(double v) {
  // %.17g round-trips every double exactly through strtod.
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s, const std::string& path) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw std::runtime_error(path + ": malformed numeric field '" + s + "'");
  return v;
}

std::int64_t parse_int(const std::string& s, const std::string& path) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    throw std::runtime_error(path + ": malformed integer field '" + s + "'");
  return v;
}

std::vector<std::string> read_lines(const std::string& path,
                                    const char* expected_header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty() || lines.front() != expected_header)
    throw std::runtime_error(path + ": missing or wrong header");
  lines.erase(lines.begin());
  return lines;
}

}  // namespace

void write_cycle_csv(const std::string& path,
                     const std::vector<CycleRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << kCycleCsvHeader << "\n";
  for (const CycleRecord& r : records) {
    out << r.cycle << ',' << r.n_cells << ',' << r.n_dofs << ',' << r.mode
        << ',' << r.smoother << ',' << r.smoothing_steps << ','
        << format_double(r.error_h1) << ',' << format_double(r.estimator_J)
        << ','
        << (r.has_estimator_J_exact ? format_double(r.estimator_J_exact) : "")
        << ',' << r.solver_iterations << ',' << r.matvec_count << ','
        << format_double(r.solve_seconds) << ',' << r.marked_cells << "\n";
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::vector<CycleRecord> read_cycle_csv(const std::string& path) {
  std::vector<CycleRecord> out;
  for (const std::string& line : read_lines(path, kCycleCsvHeader)) {
    const auto f = split_line(line);
    if (f.size() != 13)
      throw std::runtime_error(path + ": expected 13 fields per row");
    CycleRecord r;
    r.cycle = static_cast<int>(parse_int(f[0], path));
    r.n_cells = static_cast<int>(parse_int(f[1], path));
    r.n_dofs = parse_int(f[2], path);
    r.mode = f[3];
    r.smoother = f[4];
    r.smoothing_steps = static_cast<int>(parse_int(f[5], path));
    r.error_h1 = parse_double(f[6], path);
    r.estimator_J = parse_double(f[7], path);
    r.has_estimator_J_exact = !f[8].empty();
    if (r.has_estimator_J_exact) r.estimator_J_exact = parse_double(f[8], path);
    r.solver_iterations = parse_int(f[9], path);
    r.matvec_count = parse_int(f[10], path);
    r.solve_seconds = parse_double(f[11], path);
    r.marked_cells = static_cast<int>(parse_int(f[12], path));
    out.push_back(std::move(r));
  }
  return out;
}

void write_stagnation_csv(const std::string& path,
                          const std::vector<StagnationRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << kStagnationCsvHeader << "\n";
  for (const StagnationRecord& r : records)
    out << r.step << ',' << format_double(r.residual_l2) << ','
        << format_double(r.estimator_J) << "\n";
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::vector<StagnationRecord> read_stagnation_csv(const std::string& path) {
  std::vector<StagnationRecord> out;
  for (const std::string& line : read_lines(path, kStagnationCsvHeader)) {
    const auto f = split_line(line);
    if (f.size() != 3)
      throw std::runtime_error(path + ": expected 3 fields per row");
    StagnationRecord r;
    r.step = static_cast<int>(parse_int(f[0], path));
    r.residual_l2 = parse_double(f[1], path);
    r.estimator_J = parse_double(f[2], path);
    out.push_back(r);
  }
  return out;
}

void write_suite_summary(const std::string& path,
                         const std::vector<SuiteSummaryRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "label,problem,degree,mode,smoother,smoothing_steps,cycles,"
         "final_dofs,final_error_h1,final_estimator_J,total_matvecs,"
         "intermediate_matvecs,wall_seconds\n";
  for (const SuiteSummaryRow& r : rows) {
    out << r.label << ',' << r.problem << ',' << r.degree << ',' << r.mode
        << ',' << r.smoother << ',' << r.smoothing_steps << ',' << r.cycles
        << ',' << r.final_dofs << ',' << format_double(r.final_error_h1) << ','
        << format_double(r.final_estimator_J) << ',' << r.total_matvecs << ','
        << r.intermediate_matvecs << ',' << format_double(r.wall_seconds)
        << "\n";
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace safem
