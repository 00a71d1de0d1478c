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

#include <stdexcept>
#include <string>

namespace bistopriv {

// Every failure the library reports carries one of these codes so callers
// (and the CLI exit-status mapping) can dispatch without parsing messages.
enum class errc {
  // matrix validation
  not_square,
  negative_entry,
  row_sum_violation,
  column_sum_violation,
  gamma_out_of_range,
  not_strictly_bistochastic,
  // constructors
  invalid_size,
  invalid_epsilon,
  invalid_partition,
  not_a_distribution,
  alpha_constraint_violated,
  invalid_probability,
  // entropy / privacy accounting
  degenerate_size,
  size_mismatch,
  length_mismatch,
  // decomposition & estimation
  no_perfect_matching,
  threshold_out_of_range,
  singular_matrix,
  // joint randomization
  joint_too_large,
  non_categorical_column,
  // dataset and schema ingestion
  missing_column,
  unparseable_cell,
  unknown_level,
  invalid_schema,
  io_failure,
  // bad call arguments not covered by a specific code above
  invalid_argument,
};

inline const char* errc_name(errc code) {
  switch (code) {
    case errc::not_square: return "not_square";
    case errc::negative_entry: return "negative_entry";
    case errc::row_sum_violation: return "row_sum_violation";
    case errc::column_sum_violation: return "column_sum_violation";
    case errc::gamma_out_of_range: return "gamma_out_of_range";
    case errc::not_strictly_bistochastic: return "not_strictly_bistochastic";
    case errc::invalid_size: return "invalid_size";
    case errc::invalid_epsilon: return "invalid_epsilon";
    case errc::invalid_partition: return "invalid_partition";
    case errc::not_a_distribution: return "not_a_distribution";
    case errc::alpha_constraint_violated: return "alpha_constraint_violated";
    case errc::invalid_probability: return "invalid_probability";
    case errc::degenerate_size: return "degenerate_size";
    case errc::size_mismatch: return "size_mismatch";
    case errc::length_mismatch: return "length_mismatch";
    case errc::no_perfect_matching: return "no_perfect_matching";
    case errc::threshold_out_of_range: return "threshold_out_of_range";
    case errc::singular_matrix: return "singular_matrix";
    case errc::joint_too_large: return "joint_too_large";
    case errc::non_categorical_column: return "non_categorical_column";
    case errc::missing_column: return "missing_column";
    case errc::unparseable_cell: return "unparseable_cell";
    case errc::unknown_level: return "unknown_level";
    case errc::invalid_schema: return "invalid_schema";
    case errc::io_failure: return "io_failure";
    case errc::invalid_argument: return "invalid_argument";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace bistopriv
