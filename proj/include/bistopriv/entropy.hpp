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
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "bistopriv/matrix.hpp"

namespace bistopriv {

// Shannon entropy in bits with the 0*log2(0) = 0 convention.
inline double entropy_bits(const Eigen::VectorXd& p) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) > 0.0) h -= p(i) * std::log2(p(i));
  }
  return h;
}

inline double entropy_bits(const Distribution& p) {
  return entropy_bits(p.probabilities());
}

// Entropy rate under the uniform stationary distribution: the average of
// the row entropies. Rows of super-doubly-stochastic matrices are
// normalized to sum 1 first, since they only approximate a stochastic row.
inline double entropy_rate(const BistochasticMatrix& m) {
  const Eigen::Index r = m.size();
  double total = 0.0;
  for (Eigen::Index u = 0; u < r; ++u) {
    Eigen::VectorXd row = m.entries().row(u).transpose();
    if (m.super_slack() > 0.0) row /= row.sum();
    total += entropy_bits(row);
  }
  return total / double(r);
}

// Maximum number of bits a set of attributes can absorb: sum of log2 sizes.
inline double budget_bits(const std::vector<int>& sizes) {
  double total = 0.0;
  for (int n : sizes) {
    if (n < 1) {
      throw Error(errc::invalid_size,
                  "attribute size must be >= 1, got " + std::to_string(n));
    }
    total += std::log2(double(n));
  }
  return total;
}

// Privacy level of a single matrix: entropy rate over the log2(r) budget.
// 0 means untouched data, 1 means perfect secrecy.
inline double beta(const BistochasticMatrix& m) {
  if (m.size() < 2) {
    throw Error(errc::degenerate_size,
                "beta undefined for size-1 matrices (budget is 0 bits)");
  }
  const double b = entropy_rate(m) / std::log2(double(m.size()));
  return std::clamp(b, 0.0, 1.0);
}

// Multivariate level when each attribute gets its own matrix: summed
// entropy rates over the summed budget.
inline double conservative_beta(const std::vector<BistochasticMatrix>& ms) {
  if (ms.empty()) {
    throw Error(errc::degenerate_size, "no matrices given");
  }
  double entropy_sum = 0.0;
  double budget_sum = 0.0;
  for (const auto& m : ms) {
    if (m.size() < 2) {
      throw Error(errc::degenerate_size,
                  "conservative beta needs every size >= 2");
    }
    entropy_sum += entropy_rate(m);
    budget_sum += std::log2(double(m.size()));
  }
  return std::clamp(entropy_sum / budget_sum, 0.0, 1.0);
}

// Level of a matrix applied to the joint distribution of several
// attributes; joint_size is the product of the attribute sizes.
inline double joint_beta(const BistochasticMatrix& joint,
                         std::int64_t joint_size) {
  if (joint_size < 2) {
    throw Error(errc::degenerate_size, "joint size must be >= 2");
  }
  if (joint.size() != joint_size) {
    throw Error(errc::size_mismatch,
                "matrix is " + std::to_string(joint.size()) +
                    "x" + std::to_string(joint.size()) + " but joint size is " +
                    std::to_string(joint_size));
  }
  return std::clamp(entropy_rate(joint) / std::log2(double(joint_size)), 0.0,
                    1.0);
}

// Smallest differential-privacy budget the matrix satisfies as an RR
// scheme: ln of the worst within-row max/min probability ratio. Infinite
// when a row mixes zero and nonzero entries.
inline double dp_epsilon_bound(const BistochasticMatrix& m) {
  double worst = 1.0;
  for (Eigen::Index u = 0; u < m.size(); ++u) {
    const double mx = m.entries().row(u).maxCoeff();
    const double mn = m.entries().row(u).minCoeff();
    if (mn == 0.0) {
      if (mx > 0.0) return std::numeric_limits<double>::infinity();
      continue;
    }
    worst = std::max(worst, mx / mn);
  }
  return std::log(worst);
}

enum class PrivacyMode { univariate, conservative, joint };

inline const char* privacy_mode_name(PrivacyMode mode) {
  switch (mode) {
    case PrivacyMode::univariate: return "univariate";
    case PrivacyMode::conservative: return "conservative";
    case PrivacyMode::joint: return "joint";
  }
  return "unknown";
}

// Per-attribute and aggregate entropy accounting for a protection run.
struct PrivacyReport {
  struct Attribute {
    std::string name;
    double entropy_bits = 0.0;  // H(P)
    double budget_bits = 0.0;   // H(P*) = log2 size
    double beta = 0.0;
  };

  std::vector<Attribute> per_attribute;
  double aggregate_beta = 0.0;
  PrivacyMode mode = PrivacyMode::univariate;

  // One attribute per line: name, entropy bits, budget bits, beta percent.
  std::string to_text(int bits_decimals = 4, int percent_decimals = 0) const {
    std::ostringstream out;
    char buf[64];
    auto fixed = [&](double x, int decimals) {
      std::snprintf(buf, sizeof(buf), "%.*f", decimals, x);
      return std::string(buf);
    };
    for (const auto& a : per_attribute) {
      out << a.name << "  H=" << fixed(a.entropy_bits, bits_decimals)
          << " bits  budget=" << fixed(a.budget_bits, bits_decimals)
          << " bits  beta=" << fixed(100.0 * a.beta, percent_decimals)
          << "%\n";
    }
    out << "aggregate (" << privacy_mode_name(mode)
        << ")  beta=" << fixed(100.0 * aggregate_beta, percent_decimals)
        << "%\n";
    return out.str();
  }

  // Full-precision key=value form for machine consumption.
  std::string to_kv() const {
    std::ostringstream out;
    out << "mode=" << privacy_mode_name(mode) << '\n';
    for (std::size_t i = 0; i < per_attribute.size(); ++i) {
      const auto& a = per_attribute[i];
      out << "attribute." << i << ".name=" << a.name << '\n'
          << "attribute." << i
          << ".h_bits=" << detail::format_shortest(a.entropy_bits) << '\n'
          << "attribute." << i
          << ".budget_bits=" << detail::format_shortest(a.budget_bits) << '\n'
          << "attribute." << i << ".beta=" << detail::format_shortest(a.beta)
          << '\n';
    }
    out << "aggregate_beta=" << detail::format_shortest(aggregate_beta)
        << '\n';
    return out.str();
  }
};

}  // namespace bistopriv
