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

#include "safem/marking.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace safem {

namespace {

// (indicator, id) sorted by descending indicator, ties by ascending id.
std::vector<std::pair<double, int>> sorted_indicators(
    const std::map<int, double>& eta) {
  std::vector<std::pair<double, int>> v;
  v.reserve(eta.size());
  for (const auto& [id, e] : eta) v.emplace_back(e, id);
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  return v;
}

}  // namespace

std::vector<int> mark_dorfler(const std::map<int, double>& eta, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw std::invalid_argument("mark_dorfler: theta must be in [0,1]");
  if (eta.empty() || theta == 0.0) return {};
  const auto sorted = sorted_indicators(eta);
  double total = 0.0;
  for (const auto& [e, id] : sorted) total += e * e;
  if (total == 0.0) return {};
  const double target = theta * total;

  // Shortest descending prefix whose squared sum reaches the bulk target;
  // the threshold is the smallest indicator in that prefix and every tie
  // with it is included, so the marked set is exactly {eta_T >= L} for the
  // largest feasible threshold L.
  double acc = 0.0;
  std::size_t k = 0;
  while (k < sorted.size()) {
    acc += sorted[k].first * sorted[k].first;
    ++k;
    if (acc >= target) break;
  }
  const double threshold = sorted[k - 1].first;
  std::vector<int> marked;
  for (const auto& [e, id] : sorted)
    if (e >= threshold) marked.push_back(id);
  std::sort(marked.begin(), marked.end());
  return marked;
}

std::vector<int> mark_fixed_fraction(const std::map<int, double>& eta,
                                     double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw std::invalid_argument("mark_fixed_fraction: fraction must be in (0,1]");
  if (eta.empty()) return {};
  const auto sorted = sorted_indicators(eta);
  const std::size_t m = std::min(
      sorted.size(),
      static_cast<std::size_t>(
          std::ceil(fraction * static_cast<double>(sorted.size()))));
  std::vector<int> marked;
  for (std::size_t k = 0; k < m; ++k) marked.push_back(sorted[k].second);
  std::sort(marked.begin(), marked.end());
  return marked;
}

}  // namespace safem
