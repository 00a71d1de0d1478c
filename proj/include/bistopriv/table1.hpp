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

#include <cstdio>
#include <string>
#include <vector>

#include "bistopriv/constructors.hpp"
#include "bistopriv/entropy.hpp"

namespace bistopriv {

// One cell of the reference guarantee grid: twelve 12x12 parameterizations
// (differential privacy, k-anonymity, tridiagonal, circulant) with the
// guarantee each was reported to give. `mismatch` marks cells where the
// formula disagrees with the reported percentage by more than one point.
struct Table1Row {
  std::string family;
  std::string parameter;
  double computed_beta = 0.0;
  double reported_pct = 0.0;
  bool mismatch = false;
};

inline std::vector<Table1Row> table1_rows() {
  constexpr int r = 12;
  std::vector<Table1Row> rows;
  auto add = [&rows](std::string family, std::string parameter,
                     const BistochasticMatrix& m, double reported_pct) {
    Table1Row row;
    row.family = std::move(family);
    row.parameter = std::move(parameter);
    row.computed_beta = beta(m);
    row.reported_pct = reported_pct;
    row.mismatch = std::abs(100.0 * row.computed_beta - reported_pct) > 1.0;
    rows.push_back(std::move(row));
  };

  const double eps[] = {5.0, 3.0, 1.0};
  const double eps_pct[] = {17.0, 60.0, 97.0};
  for (int i = 0; i < 3; ++i) {
    add("differential-privacy", "eps=" + detail::format_shortest(eps[i]),
        dp_matrix(r, eps[i]), eps_pct[i]);
  }
  const int ks[] = {2, 3, 6};
  const double k_pct[] = {28.0, 56.0, 72.0};
  for (int i = 0; i < 3; ++i) {
    add("k-anonymity", "k=" + std::to_string(ks[i]),
        anatomy_matrix(contiguous_partition(r, ks[i])), k_pct[i]);
  }
  const double alphas[] = {0.1, 0.3, 0.4};
  const double alpha_pct[] = {24.0, 35.0, 40.0};
  for (int i = 0; i < 3; ++i) {
    add("tridiagonal", "alpha=" + detail::format_shortest(alphas[i]),
        tridiagonal_matrix(std::vector<double>(r - 1, alphas[i])),
        alpha_pct[i]);
  }
  const double p11s[] = {0.9, 0.6, 0.2};
  const double p11_pct[] = {21.0, 63.0, 93.0};
  for (int i = 0; i < 3; ++i) {
    add("circulant", "p11=" + detail::format_shortest(p11s[i]),
        constant_circulant(r, p11s[i]), p11_pct[i]);
  }
  return rows;
}

inline std::string format_table1(const std::vector<Table1Row>& rows,
                                 int decimals = 0) {
  std::string out =
      "family                parameter   computed   reported   note\n";
  char buf[128];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%-21s %-11s %*.*f%%   %6.0f%%    %s\n",
                  row.family.c_str(), row.parameter.c_str(), 7 + decimals,
                  decimals, 100.0 * row.computed_beta, row.reported_pct,
                  row.mismatch ? "MISMATCH" : "ok");
    out += buf;
  }
  return out;
}

}  // namespace bistopriv
