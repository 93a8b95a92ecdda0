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

#ifdef _OPENMP
#include <omp.h>
#endif

namespace safem {

// Every parallel kernel in the library exists in two variants selected by
// this tag. The serial variant is the reference; the parallel one must
// produce bitwise identical results, which is why kernels only ever
// parallelize over independent output slots and keep reductions serial.
enum class Execution { Serial, Parallel };

namespace parallel {

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Applies f(i) for i in [0, n). Iterations must be independent: each output
// location is written by exactly one iteration.
template <class F>
void for_each_index(int n, Execution exec, F&& f) {
#ifdef _OPENMP
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
#else
  (void)exec;
#endif
  for (int i = 0; i < n; ++i) f(i);
}

}  // namespace parallel
}  // namespace safem
