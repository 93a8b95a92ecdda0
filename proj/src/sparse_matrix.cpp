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

#include "safem/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace safem {

SparseMatrix SparseMatrix::from_pattern(
    const std::vector<std::vector<int>>& cols_per_row) {
  SparseMatrix m;
  m.row_offsets_.assign(1, 0);
  for (const auto& row : cols_per_row) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k > 0 && row[k] <= row[k - 1])
        throw std::invalid_argument("from_pattern: row columns must be sorted and unique");
      m.cols_.push_back(row[k]);
    }
    m.row_offsets_.push_back(static_cast<std::int64_t>(m.cols_.size()));
  }
  m.values_.assign(m.cols_.size(), 0.0);
  return m;
}

double& SparseMatrix::entry(int row, int col) {
  const auto begin = cols_.begin() + row_offsets_[row];
  const auto end = cols_.begin() + row_offsets_[row + 1];
  const auto it = std::lower_bound(begin, end, col);
  if (it == end || *it != col)
    throw std::out_of_range("SparseMatrix::entry: not in the pattern");
  return values_[it - cols_.begin()];
}

double SparseMatrix::get(int row, int col) const {
  const auto begin = cols_.begin() + row_offsets_[row];
  const auto end = cols_.begin() + row_offsets_[row + 1];
  const auto it = std::lower_bound(begin, end, col);
  if (it == end || *it != col) return 0.0;
  return values_[it - cols_.begin()];
}

void SparseMatrix::clear_values() {
  std::fill(values_.begin(), values_.end(), 0.0);
}

void SparseMatrix::multiply(const std::vector<double>& x,
                            std::vector<double>& y, Execution exec) const {
  const int n = rows();
  if (static_cast<int>(x.size()) != n)
    throw std::invalid_argument("SparseMatrix::multiply: size mismatch");
  y.resize(n);
  parallel::for_each_index(n, exec, [&](int r) {
    double sum = 0.0;
    for (std::int64_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k)
      sum += values_[k] * x[cols_[k]];
    y[r] = sum;
  });
}

std::vector<double> SparseMatrix::multiply(const std::vector<double>& x,
                                           Execution exec) const {
  std::vector<double> y;
  multiply(x, y, exec);
  return y;
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(rows());
  for (int r = 0; r < rows(); ++r) d[r] = get(r, r);
  return d;
}

bool SparseMatrix::is_symmetric(double tol) const {
  for (int r = 0; r < rows(); ++r)
    for (std::int64_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k)
      if (std::abs(values_[k] - get(cols_[k], r)) > tol) return false;
  return true;
}

}  // namespace safem
