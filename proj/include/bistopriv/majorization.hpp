// Copyright 2026 The bistopriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <concepts>
#include <functional>
#include <numeric>
#include <vector>

#include "bistopriv/matrix.hpp"

namespace bistopriv {

// x majorizes y: after sorting both descending, every prefix sum of x
// dominates the corresponding prefix sum of y. Majorizing means being more
// narrowly peaked, i.e. carrying less uncertainty.
inline bool majorizes(const Distribution& x, const Distribution& y,
                      double tolerance = 1e-12) {
  if (x.size() != y.size()) {
    throw Error(errc::length_mismatch,
                "distributions have lengths " + std::to_string(x.size()) +
                    " and " + std::to_string(y.size()));
  }
  std::vector<double> xs(x.probabilities().data(),
                         x.probabilities().data() + x.size());
  std::vector<double> ys(y.probabilities().data(),
                         y.probabilities().data() + y.size());
  std::sort(xs.begin(), xs.end(), std::greater<>());
  std::sort(ys.begin(), ys.end(), std::greater<>());
  double prefix_x = 0.0;
  double prefix_y = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    prefix_x += xs[k];
    prefix_y += ys[k];
    if (prefix_x < prefix_y - tolerance) return false;
  }
  return true;
}

// q = P^T p: the distribution of the anonymized attribute when the original
// is distributed as p. Always majorized by p when P is bistochastic.
inline Distribution apply_to_distribution(const BistochasticMatrix& m,
                                          const Distribution& p) {
  if (p.size() != m.size()) {
    throw Error(errc::size_mismatch,
                "distribution length " + std::to_string(p.size()) +
                    " does not match matrix size " + std::to_string(m.size()));
  }
  if (!m.strictly_bistochastic()) {
    throw Error(errc::not_strictly_bistochastic,
                "distribution transport needs super_slack = 0");
  }
  return Distribution(m.entries().transpose() * p.probabilities());
}

// Reverse mapping of the permutation model: substitute each anonymized
// value by the original value occupying the same rank. The result is a
// permutation of `original` with the rank order of `anonymized`. Ties rank
// by original index (stable).
template <std::totally_ordered T>
std::vector<T> reverse_map(const std::vector<T>& original,
                           const std::vector<T>& anonymized) {
  if (original.size() != anonymized.size()) {
    throw Error(errc::length_mismatch,
                "attribute lengths " + std::to_string(original.size()) +
                    " and " + std::to_string(anonymized.size()) + " differ");
  }
  const std::size_t n = original.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return anonymized[a] < anonymized[b];
  });
  std::vector<std::size_t> rank(n);
  for (std::size_t pos = 0; pos < n; ++pos) rank[order[pos]] = pos;

  std::vector<T> sorted_original = original;
  std::stable_sort(sorted_original.begin(), sorted_original.end());

  std::vector<T> mapped(n);
  for (std::size_t i = 0; i < n; ++i) mapped[i] = sorted_original[rank[i]];
  return mapped;
}

}  // namespace bistopriv
