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

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>

#include "bistopriv/detail/text.hpp"
#include "bistopriv/errors.hpp"

namespace bistopriv {

// Default tolerance for validating matrices built in memory.
inline constexpr double kDefaultTolerance = 1e-9;
// Looser tolerance for matrices parsed back from decimal text files.
inline constexpr double kFileTolerance = 1e-6;

// A square nonnegative matrix whose rows and columns each sum to 1 within
// `tolerance`. When `super_slack` > 0 the sums may exceed 1 by up to that
// much (a "super doubly stochastic" matrix produced by ergodicize()).
// Construction goes through validate(); holding one is proof of validity,
// and it is immutable afterwards.
class BistochasticMatrix {
 public:
  static BistochasticMatrix validate(Eigen::MatrixXd entries,
                                     double tolerance = kDefaultTolerance,
                                     double super_slack = 0.0) {
    if (!(tolerance > 0.0)) {
      throw Error(errc::invalid_argument, "tolerance must be positive");
    }
    if (!(super_slack >= 0.0)) {
      throw Error(errc::invalid_argument, "super_slack must be nonnegative");
    }
    if (entries.rows() != entries.cols()) {
      throw Error(errc::not_square,
                  "matrix is " + std::to_string(entries.rows()) + "x" +
                      std::to_string(entries.cols()) + ", expected square");
    }
    const Eigen::Index r = entries.rows();
    if (r < 1) {
      throw Error(errc::invalid_size, "matrix must have size >= 1");
    }
    for (Eigen::Index u = 0; u < r; ++u) {
      for (Eigen::Index v = 0; v < r; ++v) {
        if (!(entries(u, v) >= 0.0)) {
          throw Error(errc::negative_entry,
                      "entry (" + std::to_string(u) + "," + std::to_string(v) +
                          ") = " + detail::format_shortest(entries(u, v)) +
                          " is negative");
        }
      }
    }
    const double lo = 1.0 - tolerance;
    const double hi = 1.0 + super_slack + tolerance;
    for (Eigen::Index u = 0; u < r; ++u) {
      const double sum = entries.row(u).sum();
      if (sum < lo || sum > hi) {
        throw Error(errc::row_sum_violation,
                    "row " + std::to_string(u) + " sums to " +
                        detail::format_shortest(sum));
      }
    }
    for (Eigen::Index v = 0; v < r; ++v) {
      const double sum = entries.col(v).sum();
      if (sum < lo || sum > hi) {
        throw Error(errc::column_sum_violation,
                    "column " + std::to_string(v) + " sums to " +
                        detail::format_shortest(sum));
      }
    }
    return BistochasticMatrix(std::move(entries), tolerance, super_slack);
  }

  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  Eigen::Index size() const noexcept { return entries_.rows(); }
  double tolerance() const noexcept { return tolerance_; }
  double super_slack() const noexcept { return super_slack_; }
  bool strictly_bistochastic() const noexcept { return super_slack_ == 0.0; }

  double operator()(Eigen::Index u, Eigen::Index v) const {
    return entries_(u, v);
  }

 private:
  BistochasticMatrix(Eigen::MatrixXd entries, double tolerance,
                     double super_slack)
      : entries_(std::move(entries)),
        tolerance_(tolerance),
        super_slack_(super_slack) {}

  Eigen::MatrixXd entries_;
  double tolerance_;
  double super_slack_;
};

inline BistochasticMatrix validate(Eigen::MatrixXd entries,
                                   double tolerance = kDefaultTolerance,
                                   double super_slack = 0.0) {
  return BistochasticMatrix::validate(std::move(entries), tolerance,
                                      super_slack);
}

// A nonnegative vector summing to 1 (within 1e-9). Used for frequency
// vectors, circulant first rows and observed output distributions.
class Distribution {
 public:
  static constexpr double kTolerance = 1e-9;

  explicit Distribution(Eigen::VectorXd probabilities)
      : p_(std::move(probabilities)) {
    if (p_.size() < 1) {
      throw Error(errc::not_a_distribution, "distribution is empty");
    }
    double sum = 0.0;
    for (Eigen::Index i = 0; i < p_.size(); ++i) {
      if (!(p_(i) >= 0.0)) {
        throw Error(errc::not_a_distribution,
                    "component " + std::to_string(i) + " = " +
                        detail::format_shortest(p_(i)) + " is negative");
      }
      sum += p_(i);
    }
    if (std::abs(sum - 1.0) > kTolerance) {
      throw Error(errc::not_a_distribution,
                  "components sum to " + detail::format_shortest(sum));
    }
  }

  static Distribution uniform(Eigen::Index n) {
    return Distribution(Eigen::VectorXd::Constant(n, 1.0 / double(n)));
  }

  const Eigen::VectorXd& probabilities() const noexcept { return p_; }
  Eigen::Index size() const noexcept { return p_.size(); }
  double operator[](Eigen::Index i) const { return p_(i); }

 private:
  Eigen::VectorXd p_;
};

// Sufficient condition for nonsingularity: every diagonal entry strictly
// above 0.5 makes a bistochastic matrix strictly diagonally dominant, hence
// invertible (Levy-Desplanques). Matrices failing this may still be
// nonsingular.
inline bool is_diagonally_dominant(const BistochasticMatrix& m) {
  for (Eigen::Index u = 0; u < m.size(); ++u) {
    if (!(m(u, u) > 0.5)) return false;
  }
  return true;
}

// Ergodic-chain condition: every transition probability strictly positive.
inline bool is_strictly_positive(const BistochasticMatrix& m) {
  return (m.entries().array() > 0.0).all();
}

// Replaces every zero entry by gamma without renormalizing the rest, making
// the matrix strictly positive at the price of row/column sums slightly
// above 1. The permitted excess is recorded in super_slack. Strictly
// positive inputs are returned unchanged.
inline BistochasticMatrix ergodicize(const BistochasticMatrix& m,
                                     double gamma) {
  if (!(gamma > 0.0) || gamma > 1e-3) {
    throw Error(errc::gamma_out_of_range,
                "gamma must be in (0, 1e-3], got " +
                    detail::format_shortest(gamma));
  }
  if (is_strictly_positive(m)) return m;
  Eigen::MatrixXd entries = m.entries();
  for (Eigen::Index u = 0; u < entries.rows(); ++u) {
    for (Eigen::Index v = 0; v < entries.cols(); ++v) {
      if (entries(u, v) == 0.0) entries(u, v) = gamma;
    }
  }
  const double slack = m.super_slack() + double(m.size()) * gamma;
  return BistochasticMatrix::validate(std::move(entries), m.tolerance(),
                                      slack);
}

// Matrix file format: one row per line, comma-separated decimal floats, no
// header. Everything loaded passes through validate().
inline BistochasticMatrix load_matrix(const std::filesystem::path& path,
                                      double tolerance = kFileTolerance,
                                      double super_slack = 0.0) {
  std::ifstream in(path);
  if (!in) {
    throw Error(errc::io_failure, "cannot open " + path.string());
  }
  const auto rows = detail::parse_csv(in);
  if (rows.empty()) {
    throw Error(errc::io_failure, "empty matrix file " + path.string());
  }
  const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd entries(r, static_cast<Eigen::Index>(rows[0].size()));
  for (Eigen::Index u = 0; u < r; ++u) {
    if (static_cast<Eigen::Index>(rows[u].size()) != entries.cols()) {
      throw Error(errc::not_square,
                  path.string() + ": row " + std::to_string(u) + " has " +
                      std::to_string(rows[u].size()) + " fields, expected " +
                      std::to_string(entries.cols()));
    }
    for (Eigen::Index v = 0; v < entries.cols(); ++v) {
      double value = 0.0;
      if (!detail::parse_double(rows[u][v], value)) {
        throw Error(errc::unparseable_cell,
                    path.string() + ": row " + std::to_string(u) + " col " +
                        std::to_string(v) + ": '" + rows[u][v] +
                        "' is not a number");
      }
      entries(u, v) = value;
    }
  }
  return BistochasticMatrix::validate(std::move(entries), tolerance,
                                      super_slack);
}

inline void save_matrix(const Eigen::MatrixXd& entries,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(errc::io_failure, "cannot write " + path.string());
  }
  for (Eigen::Index u = 0; u < entries.rows(); ++u) {
    for (Eigen::Index v = 0; v < entries.cols(); ++v) {
      if (v) out << ',';
      out << detail::format_shortest(entries(u, v));
    }
    out << '\n';
  }
  if (!out) {
    throw Error(errc::io_failure, "write failed for " + path.string());
  }
}

inline void save_matrix(const BistochasticMatrix& m,
                        const std::filesystem::path& path) {
  save_matrix(m.entries(), path);
}

}  // namespace bistopriv
