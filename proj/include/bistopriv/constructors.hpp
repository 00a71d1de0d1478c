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

#include <cmath>
#include <string>
#include <vector>

#include "bistopriv/matrix.hpp"

namespace bistopriv {

// Randomized-response matrix of an epsilon-differentially-private scheme:
// diagonal e^eps/(r-1+e^eps), off-diagonal 1/(r-1+e^eps). Computed in the
// exp(-eps) form so large budgets do not overflow.
inline BistochasticMatrix dp_matrix(int r, double epsilon) {
  if (r < 2) {
    throw Error(errc::invalid_size,
                "dp matrix needs r >= 2, got " + std::to_string(r));
  }
  if (!std::isfinite(epsilon) || epsilon < 0.0) {
    throw Error(errc::invalid_epsilon, "epsilon must be finite and >= 0");
  }
  const double w = std::exp(-epsilon);
  const double denom = 1.0 + double(r - 1) * w;
  const double diag = 1.0 / denom;
  const double off = w / denom;
  Eigen::MatrixXd entries = Eigen::MatrixXd::Constant(r, r, off);
  entries.diagonal().setConstant(diag);
  return BistochasticMatrix::validate(std::move(entries));
}

// All entries 1/r, often written P*. Observing the output of this scheme
// reveals nothing about the input.
inline BistochasticMatrix perfect_secrecy_matrix(int r) {
  if (r < 1) {
    throw Error(errc::invalid_size,
                "perfect secrecy matrix needs r >= 1, got " +
                    std::to_string(r));
  }
  return BistochasticMatrix::validate(
      Eigen::MatrixXd::Constant(r, r, 1.0 / double(r)));
}

// Disjoint index classes covering 0..N-1, the shape of an anatomized
// k-anonymous release.
struct AnatomyPartition {
  std::vector<std::vector<int>> classes;

  int total() const {
    int n = 0;
    for (const auto& c : classes) n += static_cast<int>(c.size());
    return n;
  }

  static AnatomyPartition validate(std::vector<std::vector<int>> classes) {
    if (classes.empty()) {
      throw Error(errc::invalid_partition, "partition has no classes");
    }
    int n = 0;
    for (const auto& c : classes) {
      if (c.empty()) {
        throw Error(errc::invalid_partition, "partition has an empty class");
      }
      n += static_cast<int>(c.size());
    }
    std::vector<char> seen(n, 0);
    for (const auto& c : classes) {
      for (int i : c) {
        if (i < 0 || i >= n) {
          throw Error(errc::invalid_partition,
                      "index " + std::to_string(i) + " outside 0.." +
                          std::to_string(n - 1));
        }
        if (seen[i]) {
          throw Error(errc::invalid_partition,
                      "index " + std::to_string(i) + " appears twice");
        }
        seen[i] = 1;
      }
    }
    // disjointness plus total count == n already implies no gaps
    return AnatomyPartition{std::move(classes)};
  }
};

// Contiguous classes of size k over 0..n-1; the final class absorbs the
// remainder so every class has size >= k.
inline AnatomyPartition contiguous_partition(int n, int k) {
  if (n < 1 || k < 1 || k > n) {
    throw Error(errc::invalid_partition,
                "need 1 <= k <= n, got k=" + std::to_string(k) +
                    " n=" + std::to_string(n));
  }
  const int num_classes = n / k;
  std::vector<std::vector<int>> classes(num_classes);
  for (int l = 0; l < num_classes; ++l) {
    const int end = (l == num_classes - 1) ? n : (l + 1) * k;
    for (int i = l * k; i < end; ++i) classes[l].push_back(i);
  }
  return AnatomyPartition::validate(std::move(classes));
}

// Block-diagonal matrix with one uniform 1/n_l block per class: each class
// is a perfect-secrecy block, the whole is bistochastic.
inline BistochasticMatrix anatomy_matrix(const AnatomyPartition& partition) {
  AnatomyPartition checked = AnatomyPartition::validate(partition.classes);
  const int n = checked.total();
  Eigen::MatrixXd entries = Eigen::MatrixXd::Zero(n, n);
  for (const auto& cls : checked.classes) {
    const double p = 1.0 / double(cls.size());
    for (int i : cls) {
      for (int j : cls) entries(i, j) = p;
    }
  }
  return BistochasticMatrix::validate(std::move(entries));
}

// Circulant matrix: row i is the first row right-rotated i positions, so
// entry (i, j) = first_row[(j - i) mod r].
inline BistochasticMatrix circulant_matrix(const Distribution& first_row) {
  const Eigen::Index r = first_row.size();
  Eigen::MatrixXd entries(r, r);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < r; ++j) {
      entries(i, j) = first_row[(j - i + r) % r];
    }
  }
  return BistochasticMatrix::validate(std::move(entries));
}

// Symmetric tridiagonal matrix with off-diagonal parameters alphas[0..r-2]
// (entry (i, i+1) = (i+1, i) = alphas[i]) and diagonal chosen so each row
// sums to 1. Requires every diagonal entry to stay nonnegative, i.e.
// adjacent alphas summing to at most 1.
inline BistochasticMatrix tridiagonal_matrix(
    const std::vector<double>& alphas) {
  const int r = static_cast<int>(alphas.size()) + 1;
  for (int i = 0; i < r - 1; ++i) {
    if (!(alphas[i] >= 0.0) || alphas[i] > 1.0) {
      throw Error(errc::alpha_constraint_violated,
                  "alpha[" + std::to_string(i) + "] = " +
                      detail::format_shortest(alphas[i]) +
                      " outside [0, 1]");
    }
    if (i > 0 && alphas[i - 1] + alphas[i] > 1.0) {
      throw Error(errc::alpha_constraint_violated,
                  "alpha[" + std::to_string(i - 1) + "] + alpha[" +
                      std::to_string(i) + "] = " +
                      detail::format_shortest(alphas[i - 1] + alphas[i]) +
                      " exceeds 1");
    }
  }
  Eigen::MatrixXd entries = Eigen::MatrixXd::Zero(r, r);
  for (int i = 0; i < r - 1; ++i) {
    entries(i, i + 1) = alphas[i];
    entries(i + 1, i) = alphas[i];
  }
  for (int i = 0; i < r; ++i) {
    const double left = (i > 0) ? alphas[i - 1] : 0.0;
    const double right = (i < r - 1) ? alphas[i] : 0.0;
    entries(i, i) = 1.0 - left - right;
  }
  return BistochasticMatrix::validate(std::move(entries));
}

// Circulant with first row (p_diag, (1-p_diag)/(r-1), ...): the
// single-parameter family used in the reference guarantee grid.
inline BistochasticMatrix constant_circulant(int r, double p_diag) {
  if (r < 2) {
    throw Error(errc::invalid_size,
                "constant circulant needs r >= 2, got " + std::to_string(r));
  }
  if (!(p_diag >= 0.0) || !(p_diag <= 1.0)) {
    throw Error(errc::invalid_probability,
                "diagonal probability must be in [0, 1]");
  }
  Eigen::VectorXd first_row =
      Eigen::VectorXd::Constant(r, (1.0 - p_diag) / double(r - 1));
  first_row(0) = p_diag;
  return circulant_matrix(Distribution(std::move(first_row)));
}

inline Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a,
                                 const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
          a(i, j) * b;
    }
  }
  return out;
}

// Joint-distribution matrix of independent per-attribute schemes. The index
// order matches pram joint encoding: the first factor is most significant.
inline BistochasticMatrix kronecker(const BistochasticMatrix& a,
                                    const BistochasticMatrix& b) {
  return BistochasticMatrix::validate(kronecker(a.entries(), b.entries()));
}

}  // namespace bistopriv
