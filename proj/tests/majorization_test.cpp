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

#include "bistopriv/majorization.hpp"

#include <gtest/gtest.h>

#include "bistopriv/constructors.hpp"
#include "bistopriv/entropy.hpp"
#include "support/generators.hpp"

namespace bistopriv {
namespace {

using test::random_bistochastic;
using test::random_dirichlet;

Distribution dist(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return Distribution(v);
}

TEST(Majorizes, PointMassMajorizesEverything) {
  EXPECT_TRUE(majorizes(dist({1, 0, 0}), dist({0.5, 0.5, 0})));
}

TEST(Majorizes, UniformIsMajorizedByEverything) {
  EXPECT_TRUE(majorizes(dist({0.5, 0.3, 0.2}),
                        dist({1.0 / 3, 1.0 / 3, 1.0 / 3})));
}

TEST(Majorizes, IncomparablePairExists) {
  // prefix sums 0.6 >= 0.5 but 0.8 < 0.9
  const auto x = dist({0.6, 0.2, 0.2});
  const auto y = dist({0.5, 0.4, 0.1});
  EXPECT_FALSE(majorizes(x, y));
  EXPECT_FALSE(majorizes(y, x));
}

TEST(Majorizes, OrderIndependentAndReflexive) {
  const auto x = dist({0.2, 0.5, 0.3});
  const auto shuffled = dist({0.5, 0.3, 0.2});
  EXPECT_TRUE(majorizes(x, shuffled));
  EXPECT_TRUE(majorizes(shuffled, x));
  EXPECT_TRUE(majorizes(x, x));
}

TEST(Majorizes, LengthMismatch) {
  EXPECT_ERRC(errc::length_mismatch, majorizes(dist({1}), dist({0.5, 0.5})));
}

TEST(Majorizes, TransitiveOnSamples) {
  SeedStream s(41);
  int checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int r = 3 + int(s.next_u64() % 4);
    const Distribution a(random_dirichlet(r, s));
    const Distribution c(random_dirichlet(r, s));
    // route b between them through a bistochastic mix of a
    const Distribution b = apply_to_distribution(random_bistochastic(r, s), a);
    if (majorizes(a, b) && majorizes(b, c)) {
      EXPECT_TRUE(majorizes(a, c));
      ++checked;
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(Majorizes, AntisymmetricUpToSortedEquality) {
  SeedStream s(45);
  for (int trial = 0; trial < 200; ++trial) {
    const int r = 2 + int(s.next_u64() % 5);
    const Distribution x(random_dirichlet(r, s));
    // y is a shuffle of x, so both directions hold and sorted forms agree
    std::vector<double> shuffled(x.probabilities().data(),
                                 x.probabilities().data() + r);
    for (int i = r - 1; i > 0; --i) {
      std::swap(shuffled[i], shuffled[s.next_u64() % std::uint64_t(i + 1)]);
    }
    const Distribution y(
        Eigen::Map<const Eigen::VectorXd>(shuffled.data(), r));
    ASSERT_TRUE(majorizes(x, y));
    ASSERT_TRUE(majorizes(y, x));
    // and whenever both directions hold, sorted vectors must agree
    auto sorted = [](const Distribution& d) {
      std::vector<double> v(d.probabilities().data(),
                            d.probabilities().data() + d.size());
      std::sort(v.begin(), v.end());
      return v;
    };
    const Distribution z(random_dirichlet(r, s));
    if (majorizes(x, z) && majorizes(z, x)) {
      const auto sx = sorted(x);
      const auto sz = sorted(z);
      for (int i = 0; i < r; ++i) EXPECT_NEAR(sx[i], sz[i], 1e-12);
    }
  }
}

TEST(ApplyToDistribution, PerfectSecrecyUniformizes) {
  const auto out =
      apply_to_distribution(perfect_secrecy_matrix(3), dist({0.7, 0.2, 0.1}));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(out[i], 1.0 / 3.0, 1e-15);
}

TEST(ApplyToDistribution, IdentityKeepsInput) {
  const auto p = dist({0.7, 0.2, 0.1});
  const auto out = apply_to_distribution(
      BistochasticMatrix::validate(Eigen::MatrixXd::Identity(3, 3)), p);
  EXPECT_EQ(out.probabilities(), p.probabilities());
}

TEST(ApplyToDistribution, DpOnPointMassGivesFirstColumn) {
  const auto m = dp_matrix(3, 2.0);
  const auto out = apply_to_distribution(m, dist({1, 0, 0}));
  EXPECT_NEAR(out[0], 0.7869860421615986, 1e-12);
  EXPECT_NEAR(out[1], 0.10650697891920075, 1e-12);
  EXPECT_NEAR(out[2], 0.10650697891920075, 1e-12);
}

TEST(ApplyToDistribution, Errors) {
  EXPECT_ERRC(errc::size_mismatch,
              apply_to_distribution(perfect_secrecy_matrix(3), dist({1, 0})));
  const auto slacked = ergodicize(
      BistochasticMatrix::validate(Eigen::MatrixXd::Identity(2, 2)), 1e-5);
  EXPECT_ERRC(errc::not_strictly_bistochastic,
              apply_to_distribution(slacked, dist({0.5, 0.5})));
}

TEST(ReverseMap, DirectRuleApplication) {
  const std::vector<double> original{10, 20, 30};
  const std::vector<double> anonymized{0.3, 0.1, 0.2};
  EXPECT_EQ(reverse_map(original, anonymized),
            (std::vector<double>{30, 10, 20}));
}

TEST(ReverseMap, RankAlignedInputIsFixedPoint) {
  const std::vector<int> original{4, 8, 15, 16};
  const std::vector<int> anonymized{1, 3, 7, 9};  // same rank order
  EXPECT_EQ(reverse_map(original, anonymized), original);
}

TEST(ReverseMap, StableUnderTies) {
  const std::vector<int> original{5, 5, 7};
  const std::vector<int> anonymized{2, 1, 3};
  EXPECT_EQ(reverse_map(original, anonymized), (std::vector<int>{5, 5, 7}));
}

TEST(ReverseMap, LengthMismatch) {
  EXPECT_ERRC(errc::length_mismatch,
              reverse_map(std::vector<int>{1}, std::vector<int>{1, 2}));
}

TEST(ReverseMap, PermutationAndRankProperties) {
  SeedStream s(42);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + int(s.next_u64() % 20);
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = s.next_double() * 10.0;
      y[i] = s.next_double() * 10.0;
    }
    const auto z = reverse_map(x, y);
    // (i) permutation of the original multiset
    auto sx = x;
    auto sz = z;
    std::sort(sx.begin(), sx.end());
    std::sort(sz.begin(), sz.end());
    EXPECT_EQ(sx, sz);
    // (ii) same rank order as the anonymized attribute
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (y[i] < y[j]) {
          EXPECT_LE(z[i], z[j]);
        }
      }
    }
  }
}

TEST(TheoremTwo, BistochasticActionNeverSharpens) {
  SeedStream s(43);
  for (int trial = 0; trial < 1000; ++trial) {
    const int r = 2 + int(s.next_u64() % 11);
    const auto m = random_bistochastic(r, s);
    const Distribution p(random_dirichlet(r, s));
    const Distribution q = apply_to_distribution(m, p);
    EXPECT_TRUE(majorizes(p, q));
    EXPECT_GE(entropy_bits(q), entropy_bits(p) - 1e-12);
  }
}

// Contrapositive spot check of the converse: right-stochastic but not
// bistochastic matrices should admit a violating distribution.
TEST(TheoremTwo, FalsificationHarnessFindsViolations) {
  SeedStream s(44);
  int found = 0;
  int total = 0;
  while (total < 20) {
    const int r = 3 + int(s.next_u64() % 6);
    const Eigen::MatrixXd m = test::random_right_stochastic(r, s);
    if (test::columns_near_one(m, 1e-3)) continue;  // would be ~bistochastic
    ++total;
    if (test::finds_majorization_violation(m, s)) ++found;
  }
  EXPECT_GE(found, 18);  // >= 90%
}

}  // namespace
}  // namespace bistopriv
