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
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bistopriv/matrix.hpp"
#include "bistopriv/rng.hpp"

namespace bistopriv {

inline constexpr double kDefaultZeroThreshold = 1e-12;

struct BirkhoffTerm {
  double weight = 0.0;
  std::vector<int> permutation;  // permutation[u] = v: category u maps to v
};

// Convex combination of permutation matrices summing to a bistochastic
// matrix: weights positive and summing to 1, permutations pairwise
// distinct, at most r^2 - 2r + 2 terms.
class BirkhoffDecomposition {
 public:
  BirkhoffDecomposition(std::vector<BirkhoffTerm> terms, int size)
      : terms_(std::move(terms)), size_(size) {
    if (size_ < 1 || terms_.empty()) {
      throw Error(errc::invalid_argument, "decomposition must be nonempty");
    }
    const long bound = long(size_) * size_ - 2L * size_ + 2L;
    if (static_cast<long>(terms_.size()) > bound) {
      throw Error(errc::invalid_argument,
                  std::to_string(terms_.size()) +
                      " terms exceed the r^2-2r+2 bound of " +
                      std::to_string(bound));
    }
    double sum = 0.0;
    std::set<std::vector<int>> distinct;
    for (const auto& term : terms_) {
      if (!(term.weight > 0.0) || term.weight > 1.0 + 1e-12) {
        throw Error(errc::invalid_argument, "weights must lie in (0, 1]");
      }
      if (!is_permutation(term.permutation)) {
        throw Error(errc::invalid_argument,
                    "term is not a permutation of 0.." +
                        std::to_string(size_ - 1));
      }
      if (!distinct.insert(term.permutation).second) {
        throw Error(errc::invalid_argument, "duplicate permutation term");
      }
      sum += term.weight;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw Error(errc::invalid_argument,
                  "weights sum to " + detail::format_shortest(sum));
    }
  }

  const std::vector<BirkhoffTerm>& terms() const noexcept { return terms_; }
  int size() const noexcept { return size_; }

  // One term per line: "weight; sigma(0) sigma(1) ... sigma(r-1)".
  std::string to_lines() const {
    std::string out;
    for (const auto& term : terms_) {
      out += detail::format_shortest(term.weight);
      out += ';';
      for (int v : term.permutation) {
        out += ' ';
        out += std::to_string(v);
      }
      out += '\n';
    }
    return out;
  }

 private:
  bool is_permutation(const std::vector<int>& p) const {
    if (static_cast<int>(p.size()) != size_) return false;
    std::vector<char> seen(size_, 0);
    for (int v : p) {
      if (v < 0 || v >= size_ || seen[v]) return false;
      seen[v] = 1;
    }
    return true;
  }

  std::vector<BirkhoffTerm> terms_;
  int size_;
};

inline Eigen::MatrixXd permutation_matrix(const std::vector<int>& perm) {
  const int r = static_cast<int>(perm.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(r, r);
  for (int u = 0; u < r; ++u) m(u, perm[u]) = 1.0;
  return m;
}

namespace detail {

// Perfect matching on the bipartite support graph {(u,v) : entries >
// threshold} via augmenting paths. Fully deterministic: rows are processed
// in ascending index, and within each row candidate columns are tried by
// descending entry value with ties broken by ascending column index.
inline std::optional<std::vector<int>> perfect_matching(
    const Eigen::MatrixXd& entries, double threshold) {
  const int r = static_cast<int>(entries.rows());
  std::vector<std::vector<int>> candidates(r);
  for (int u = 0; u < r; ++u) {
    auto& cols = candidates[u];
    for (int v = 0; v < r; ++v) {
      if (entries(u, v) > threshold) cols.push_back(v);
    }
    std::sort(cols.begin(), cols.end(), [&](int a, int b) {
      if (entries(u, a) != entries(u, b)) return entries(u, a) > entries(u, b);
      return a < b;
    });
  }

  std::vector<int> col_to_row(r, -1);
  std::vector<char> visited(r, 0);
  auto augment = [&](auto&& self, int u) -> bool {
    for (int v : candidates[u]) {
      if (visited[v]) continue;
      visited[v] = 1;
      if (col_to_row[v] < 0 || self(self, col_to_row[v])) {
        col_to_row[v] = u;
        return true;
      }
    }
    return false;
  };

  for (int u = 0; u < r; ++u) {
    std::fill(visited.begin(), visited.end(), 0);
    if (!augment(augment, u)) return std::nullopt;
  }
  std::vector<int> row_to_col(r, -1);
  for (int v = 0; v < r; ++v) row_to_col[col_to_row[v]] = v;
  return row_to_col;
}

}  // namespace detail

// Greedy Birkhoff peeling: repeatedly match a permutation on the residual
// support, peel off the minimum matched entry as that permutation's weight,
// and clamp entries that drop below zero_threshold. Terminates with the
// residual's largest entry at most r * zero_threshold; weights are
// renormalized to absorb the clamped dust. Deterministic for a given input.
inline BirkhoffDecomposition decompose(
    const BistochasticMatrix& m,
    double zero_threshold = kDefaultZeroThreshold) {
  if (!(zero_threshold > 0.0) || zero_threshold > 1e-6) {
    throw Error(errc::threshold_out_of_range,
                "zero threshold must be in (0, 1e-6]");
  }
  if (!m.strictly_bistochastic()) {
    throw Error(errc::not_strictly_bistochastic,
                "cannot decompose a super doubly stochastic matrix; "
                "decompose before ergodicizing");
  }
  const int r = static_cast<int>(m.size());
  if (double(r) * zero_threshold >= 0.5 / double(r)) {
    throw Error(errc::threshold_out_of_range,
                "zero threshold too coarse to resolve the support of a " +
                    std::to_string(r) + "x" + std::to_string(r) + " matrix");
  }
  Eigen::MatrixXd residual = m.entries();
  std::vector<BirkhoffTerm> terms;

  while (residual.maxCoeff() > double(r) * zero_threshold) {
    auto matching = detail::perfect_matching(residual, zero_threshold);
    if (!matching) {
      throw Error(errc::no_perfect_matching,
                  "residual support admits no perfect matching after " +
                      std::to_string(terms.size()) +
                      " terms; matrix numerically degraded");
    }
    double weight = residual(0, (*matching)[0]);
    for (int u = 1; u < r; ++u) {
      weight = std::min(weight, residual(u, (*matching)[u]));
    }
    for (int u = 0; u < r; ++u) {
      double& cell = residual(u, (*matching)[u]);
      cell -= weight;
      if (cell < zero_threshold) cell = 0.0;
    }
    terms.push_back(BirkhoffTerm{weight, std::move(*matching)});
  }

  double total = 0.0;
  for (const auto& t : terms) total += t.weight;
  for (auto& t : terms) t.weight /= total;
  return BirkhoffDecomposition(std::move(terms), r);
}

// Weighted sum of the permutation matrices.
inline Eigen::MatrixXd recompose(const BirkhoffDecomposition& d) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d.size(), d.size());
  for (const auto& term : d.terms()) {
    for (int u = 0; u < d.size(); ++u) {
      out(u, term.permutation[u]) += term.weight;
    }
  }
  return out;
}

// Draws one permutation, term j with probability weight_j.
inline std::vector<int> sample_permutation(const BirkhoffDecomposition& d,
                                           SeedStream& stream) {
  std::vector<double> weights;
  weights.reserve(d.terms().size());
  for (const auto& term : d.terms()) weights.push_back(term.weight);
  const int j = stream.sample_categorical(weights);
  return d.terms()[j].permutation;
}

}  // namespace bistopriv
