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

#include "safem/parallel.hpp"

namespace safem {

// Square CSR matrix with a fixed sparsity pattern. Column indices within a
// row are strictly increasing. The parallel matrix-vector product splits by
// rows and is bitwise identical to the serial one since each row sum is
// computed by a single thread in the same order.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  // cols_per_row[i] must be sorted and duplicate-free.
  static SparseMatrix from_pattern(const std::vector<std::vector<int>>& cols_per_row);

  int rows() const { return static_cast<int>(row_offsets_.size()) - 1; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(cols_.size()); }

  // Reference to an entry that exists in the pattern; throws otherwise.
  double& entry(int row, int col);
  // Value at (row, col), zero if outside the pattern.
  double get(int row, int col) const;
  void clear_values();

  void multiply(const std::vector<double>& x, std::vector<double>& y,
                Execution exec = Execution::Parallel) const;
  std::vector<double> multiply(const std::vector<double>& x,
                               Execution exec = Execution::Parallel) const;

  std::vector<double> diagonal() const;
  bool is_symmetric(double tol) const;

  const std::vector<std::int64_t>& row_offsets() const { return row_offsets_; }
  const std::vector<int>& cols() const { return cols_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

 private:
  std::vector<std::int64_t> row_offsets_{0};
  std::vector<int> cols_;
  std::vector<double> values_;
};

}  // namespace safem
