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

#include <Eigen/LU>
#include <algorithm>
#include <cstdint>
#include <future>
#include <string>
#include <utility>
#include <vector>

#include "bistopriv/birkhoff.hpp"
#include "bistopriv/dataset.hpp"
#include "bistopriv/entropy.hpp"
#include "bistopriv/matrix.hpp"
#include "bistopriv/rng.hpp"

namespace bistopriv {

namespace detail {

// Per-row cumulative sums for inverse-CDF category sampling.
inline std::vector<std::vector<double>> row_cumulatives(
    const Eigen::MatrixXd& entries) {
  std::vector<std::vector<double>> cum(entries.rows());
  for (Eigen::Index u = 0; u < entries.rows(); ++u) {
    auto& row = cum[u];
    row.resize(entries.cols());
    double acc = 0.0;
    for (Eigen::Index v = 0; v < entries.cols(); ++v) {
      acc += entries(u, v);
      row[v] = acc;
    }
  }
  return cum;
}

inline std::int32_t sample_from_cumulative(const std::vector<double>& cum,
                                           double u01) {
  const auto it = std::upper_bound(cum.begin(), cum.end(), u01);
  if (it != cum.end()) return static_cast<std::int32_t>(it - cum.begin());
  // u beyond the final cumulative (row-sum dust): last positive-probability
  // index, never a zero-probability one
  int v = static_cast<int>(cum.size()) - 1;
  while (v > 0 && cum[v] == cum[v - 1]) --v;
  return v;
}

inline void require_strict(const BistochasticMatrix& m, const char* what) {
  if (!m.strictly_bistochastic()) {
    throw Error(errc::not_strictly_bistochastic,
                std::string(what) + " needs super_slack = 0");
  }
}

}  // namespace detail

// Randomized response / PRAM on a categorical column: each record's level u
// is independently resampled to v with probability P(u, v).
inline AttributeColumn randomize_categorical(const AttributeColumn& col,
                                             const BistochasticMatrix& m,
                                             SeedStream& stream) {
  const auto& data = col.as_categorical();
  detail::require_strict(m, "categorical randomization");
  if (static_cast<Eigen::Index>(data.levels.size()) != m.size()) {
    throw Error(errc::size_mismatch,
                "column '" + col.name() + "' has " +
                    std::to_string(data.levels.size()) +
                    " levels but the matrix is " + std::to_string(m.size()) +
                    "x" + std::to_string(m.size()));
  }
  const auto cum = detail::row_cumulatives(m.entries());
  std::vector<std::int32_t> codes(data.codes.size());
  for (std::size_t i = 0; i < data.codes.size(); ++i) {
    codes[i] =
        detail::sample_from_cumulative(cum[data.codes[i]], stream.next_double());
  }
  return AttributeColumn::categorical(col.name(), data.levels,
                                      std::move(codes));
}

// Deterministic coarsening of a numerical column: y = P^T x. Row sums of 1
// make this mean-preserving; block-uniform matrices microaggregate.
inline AttributeColumn transform_numeric_linear(const AttributeColumn& col,
                                                const BistochasticMatrix& m) {
  const auto& data = col.as_numerical();
  detail::require_strict(m, "linear transform");
  if (static_cast<Eigen::Index>(data.values.size()) != m.size()) {
    throw Error(errc::size_mismatch,
                "column '" + col.name() + "' has " +
                    std::to_string(data.values.size()) +
                    " records but the matrix is " + std::to_string(m.size()) +
                    "x" + std::to_string(m.size()));
  }
  const Eigen::Map<const Eigen::VectorXd> x(data.values.data(),
                                            data.values.size());
  Eigen::VectorXd y = m.entries().transpose() * x;
  return AttributeColumn::numerical(
      col.name(), std::vector<double>(y.data(), y.data() + y.size()));
}

// Probabilistic permutation of a numerical column: draw one permutation
// from the Birkhoff decomposition (term j with probability weight_j) and
// reorder the truthful values by it. E[output] = P^T x.
inline AttributeColumn transform_numeric_permute(const AttributeColumn& col,
                                                 const BistochasticMatrix& m,
                                                 SeedStream& stream) {
  const auto& data = col.as_numerical();
  if (static_cast<Eigen::Index>(data.values.size()) != m.size()) {
    throw Error(errc::size_mismatch,
                "column '" + col.name() + "' has " +
                    std::to_string(data.values.size()) +
                    " records but the matrix is " + std::to_string(m.size()) +
                    "x" + std::to_string(m.size()));
  }
  const BirkhoffDecomposition d = decompose(m);
  const std::vector<int> perm = sample_permutation(d, stream);
  std::vector<double> values(data.values.size());
  for (std::size_t u = 0; u < perm.size(); ++u) {
    values[perm[u]] = data.values[u];  // value of individual u reported at v
  }
  return AttributeColumn::numerical(col.name(), std::move(values));
}

struct FrequencyEstimate {
  Eigen::VectorXd pi_hat;
  bool has_negative = false;  // sampling noise can push estimates below 0
};

// Unbiased frequency estimator: solve P^T pi = lambda for the original
// distribution pi given the observed output distribution lambda. Accepts
// any right-stochastic transition matrix; fails when it is singular (e.g.
// the perfect secrecy matrix, which destroys frequency information).
// Negative components are returned raw and flagged, never clipped.
inline FrequencyEstimate estimate_frequencies(const Distribution& observed,
                                              const Eigen::MatrixXd& transition) {
  if (transition.rows() != transition.cols()) {
    throw Error(errc::size_mismatch, "transition matrix is not square");
  }
  if (observed.size() != transition.rows()) {
    throw Error(errc::size_mismatch,
                "observed vector length " + std::to_string(observed.size()) +
                    " does not match matrix size " +
                    std::to_string(transition.rows()));
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(transition.transpose());
  if (!lu.isInvertible()) {
    throw Error(errc::singular_matrix,
                "estimator unavailable: matrix singular");
  }
  FrequencyEstimate est;
  est.pi_hat = lu.solve(observed.probabilities());
  est.has_negative = (est.pi_hat.array() < 0.0).any();
  return est;
}

enum class ColumnMode { sample, linear, permute };

inline const char* column_mode_name(ColumnMode mode) {
  switch (mode) {
    case ColumnMode::sample: return "sample";
    case ColumnMode::linear: return "linear";
    case ColumnMode::permute: return "permute";
  }
  return "unknown";
}

struct AnonymizeResult {
  Dataset dataset;
  PrivacyReport report;
};

namespace detail {

inline Eigen::Index expected_matrix_size(const AttributeColumn& col) {
  return col.kind() == ColumnKind::categorical
             ? static_cast<Eigen::Index>(col.as_categorical().levels.size())
             : static_cast<Eigen::Index>(col.record_count());
}

inline AttributeColumn apply_column(const AttributeColumn& col,
                                    const BistochasticMatrix& m,
                                    ColumnMode mode, SeedStream stream) {
  switch (mode) {
    case ColumnMode::sample:
      return randomize_categorical(col, m, stream);
    case ColumnMode::linear:
      return transform_numeric_linear(col, m);
    case ColumnMode::permute:
      return transform_numeric_permute(col, m, stream);
  }
  throw Error(errc::invalid_argument, "unknown column mode");
}

}  // namespace detail

// Attribute-by-attribute anonymization: column k is protected with
// matrices[k] under modes[k], consuming an independent seed substream
// derived from (master_seed, k) so serial and column-parallel execution
// produce identical output. The report carries the conservative beta.
inline AnonymizeResult anonymize_conservative(
    const Dataset& ds, const std::vector<BistochasticMatrix>& matrices,
    const std::vector<ColumnMode>& modes, std::uint64_t master_seed,
    bool parallel = false) {
  const std::size_t k_count = ds.columns().size();
  if (matrices.size() != k_count || modes.size() != k_count) {
    throw Error(errc::size_mismatch,
                "need one matrix and one mode per column (" +
                    std::to_string(k_count) + " columns, " +
                    std::to_string(matrices.size()) + " matrices, " +
                    std::to_string(modes.size()) + " modes)");
  }

  // Validate everything up front so errors name all offending columns.
  std::string problems;
  for (std::size_t k = 0; k < k_count; ++k) {
    const auto& col = ds.columns()[k];
    std::string problem;
    const bool categorical = col.kind() == ColumnKind::categorical;
    if (categorical && modes[k] != ColumnMode::sample) {
      problem = "categorical columns only support mode 'sample'";
    } else if (!categorical && modes[k] == ColumnMode::sample) {
      problem = "numerical columns need mode 'linear' or 'permute'";
    } else if (detail::expected_matrix_size(col) != matrices[k].size()) {
      problem = "matrix size " + std::to_string(matrices[k].size()) +
                " does not match expected " +
                std::to_string(detail::expected_matrix_size(col));
    } else if (!matrices[k].strictly_bistochastic()) {
      problem = "matrix has super_slack > 0";
    }
    if (!problem.empty()) {
      if (!problems.empty()) problems += "; ";
      problems += "column '" + col.name() + "': " + problem;
    }
  }
  if (!problems.empty()) {
    throw Error(errc::size_mismatch, problems);
  }

  std::vector<AttributeColumn> out;
  out.reserve(k_count);
  if (parallel) {
    std::vector<std::future<AttributeColumn>> futures;
    futures.reserve(k_count);
    for (std::size_t k = 0; k < k_count; ++k) {
      futures.push_back(std::async(std::launch::async, [&, k] {
        return detail::apply_column(ds.columns()[k], matrices[k], modes[k],
                                    SeedStream(derive_seed(master_seed, k)));
      }));
    }
    for (auto& f : futures) out.push_back(f.get());
  } else {
    for (std::size_t k = 0; k < k_count; ++k) {
      out.push_back(
          detail::apply_column(ds.columns()[k], matrices[k], modes[k],
                               SeedStream(derive_seed(master_seed, k))));
    }
  }

  PrivacyReport report;
  report.mode = PrivacyMode::conservative;
  for (std::size_t k = 0; k < k_count; ++k) {
    PrivacyReport::Attribute attr;
    attr.name = ds.columns()[k].name();
    attr.entropy_bits = entropy_rate(matrices[k]);
    attr.budget_bits = std::log2(double(matrices[k].size()));
    attr.beta = beta(matrices[k]);
    report.per_attribute.push_back(std::move(attr));
  }
  report.aggregate_beta = conservative_beta(matrices);
  return AnonymizeResult{Dataset(std::move(out)), std::move(report)};
}

// Randomization of the joint distribution: each record's level tuple is
// encoded as one mixed-radix joint category (first column most
// significant), pushed through the joint matrix, and decoded back.
inline AnonymizeResult joint_randomize(const Dataset& ds,
                                       const BistochasticMatrix& joint,
                                       SeedStream& stream,
                                       std::int64_t joint_size_cap = 4096) {
  if (ds.columns().empty()) {
    throw Error(errc::invalid_argument, "dataset has no columns");
  }
  std::vector<std::int64_t> radices;
  std::int64_t joint_size = 1;
  std::string joint_name;
  for (const auto& col : ds.columns()) {
    const auto& data = col.as_categorical();  // non_categorical_column if not
    const auto r = static_cast<std::int64_t>(data.levels.size());
    radices.push_back(r);
    joint_size *= r;
    if (joint_size > joint_size_cap) {
      throw Error(errc::joint_too_large,
                  "joint size exceeds cap of " +
                      std::to_string(joint_size_cap) +
                      " (cost grows exponentially with attributes)");
    }
    if (!joint_name.empty()) joint_name += '*';
    joint_name += col.name();
  }
  if (joint.size() != joint_size) {
    throw Error(errc::size_mismatch,
                "joint matrix is " + std::to_string(joint.size()) + "x" +
                    std::to_string(joint.size()) + " but the joint has " +
                    std::to_string(joint_size) + " categories");
  }
  detail::require_strict(joint, "joint randomization");

  const std::size_t n = ds.record_count();
  const std::size_t k_count = ds.columns().size();
  // cumulative rows built lazily: only joint categories present in the data
  // cost memory, not the full joint_size^2
  std::vector<std::vector<double>> cum_cache(joint_size);
  auto row_cumulative =
      [&](std::int64_t u) -> const std::vector<double>& {
    auto& row = cum_cache[u];
    if (row.empty()) {
      row.resize(joint_size);
      double acc = 0.0;
      for (std::int64_t v = 0; v < joint_size; ++v) {
        acc += joint(u, v);
        row[v] = acc;
      }
    }
    return row;
  };
  std::vector<std::vector<std::int32_t>> out_codes(
      k_count, std::vector<std::int32_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t code = 0;
    for (std::size_t k = 0; k < k_count; ++k) {
      code = code * radices[k] + ds.columns()[k].as_categorical().codes[i];
    }
    std::int64_t randomized = detail::sample_from_cumulative(
        row_cumulative(code), stream.next_double());
    for (std::size_t k = k_count; k-- > 0;) {
      out_codes[k][i] = static_cast<std::int32_t>(randomized % radices[k]);
      randomized /= radices[k];
    }
  }

  std::vector<AttributeColumn> out;
  out.reserve(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    out.push_back(AttributeColumn::categorical(
        ds.columns()[k].name(), ds.columns()[k].as_categorical().levels,
        std::move(out_codes[k])));
  }

  PrivacyReport report;
  report.mode = PrivacyMode::joint;
  PrivacyReport::Attribute attr;
  attr.name = joint_name;
  attr.entropy_bits = entropy_rate(joint);
  attr.budget_bits = std::log2(double(joint_size));
  attr.beta = joint_beta(joint, joint_size);
  report.per_attribute.push_back(std::move(attr));
  report.aggregate_beta = report.per_attribute[0].beta;
  return AnonymizeResult{Dataset(std::move(out)), std::move(report)};
}

}  // namespace bistopriv
