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

#include <map>
#include <vector>

namespace safem {

// Bulk (Doerfler) marking: the returned cells M satisfy
//   sum_{T in M} eta_T^2 >= theta * sum_T eta_T^2
// and are of the form {eta_T >= L} for the largest threshold L that still
// satisfies the bulk condition. Ties at the threshold are all included,
// which keeps the set id-order independent. theta = 0 marks nothing,
// theta = 1 marks every cell with a positive indicator. Returned ids are
// ascending. Throws std::invalid_argument for theta outside [0,1].
std::vector<int> mark_dorfler(const std::map<int, double>& eta, double theta);

// Marks the ceil(fraction * n) cells with the largest indicators; ties at
// the cutoff resolve toward the smaller cell id. Returned ids are
// ascending. Throws std::invalid_argument for fraction outside (0,1].
std::vector<int> mark_fixed_fraction(const std::map<int, double>& eta,
                                     double fraction);

}  // namespace safem
