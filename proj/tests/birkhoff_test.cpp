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

#include "bistopriv/birkhoff.hpp"

#include <gtest/gtest.h>

#include "bistopriv/constructors.hpp"
#include "support/generators.hpp"

namespace bistopriv {
namespace {

using test::random_bistochastic;

double weight_sum(const BirkhoffDecomposition& d) {
  double sum = 0.0;
  for (const auto& t : d.terms()) sum += t.weight;
  return sum;
}

TEST(Decompose, PerfectSecrecyThree) {
  const auto d = decompose(perfect_secrecy_matrix(3));
  EXPECT_LE(d.terms().size(), 5u);  // r^2 - 2r + 2
  EXPECT_NEAR(weight_sum(d), 1.0, 1e-9);
  const double err = (recompose(d) - perfect_secrecy_matrix(3).entries())
                         .cwiseAbs()
                         .maxCoeff();
  EXPECT_LE(err, 1e-9);
  for (const auto& t : d.terms()) EXPECT_NEAR(t.weight, 1.0 / 3.0, 1e-12);
}

TEST(Decompose, IdentityIsSingleTerm) {
  const auto d = decompose(
      BistochasticMatrix::validate(Eigen::MatrixXd::Identity(4, 4)));
  ASSERT_EQ(d.terms().size(), 1u);
  EXPECT_DOUBLE_EQ(d.terms()[0].weight, 1.0);
  EXPECT_EQ(d.terms()[0].permutation, (std::vector<int>{0, 1, 2, 3}));
}

TEST(Decompose, DpEpsilonTwoPeelsIdentityFirst) {
  const auto m = dp_matrix(3, 2.0);
  const auto d = decompose(m);
  const double err = (recompose(d) - m.entries()).cwiseAbs().maxCoeff();
  EXPECT_LE(err, 1e-9);
  // the greedy tie-break peels the dominant diagonal first
  const std::vector<int> identity{0, 1, 2};
  ASSERT_FALSE(d.terms().empty());
  EXPECT_EQ(d.terms()[0].permutation, identity);
  EXPECT_GE(d.terms()[0].weight, 0.7869860421615986 - 1e-9);
}

TEST(Decompose, RejectsBadInputs) {
  const auto m = perfect_secrecy_matrix(3);
  EXPECT_ERRC(errc::threshold_out_of_range, decompose(m, 0.0));
  EXPECT_ERRC(errc::threshold_out_of_range, decompose(m, 1e-3));
  const auto slacked = ergodicize(
      BistochasticMatrix::validate(Eigen::MatrixXd::Identity(3, 3)), 1e-6);
  EXPECT_ERRC(errc::not_strictly_bistochastic, decompose(slacked));
}

TEST(Recompose, SingleTermGivesPermutationMatrix) {
  const BirkhoffDecomposition d({{1.0, {2, 0, 1}}}, 3);
  EXPECT_EQ(recompose(d), permutation_matrix({2, 0, 1}));
}

TEST(Recompose, TwoTermHalfMix) {
  const BirkhoffDecomposition d({{0.5, {0, 1}}, {0.5, {1, 0}}}, 2);
  Eigen::MatrixXd want(2, 2);
  want << .5, .5, .5, .5;
  EXPECT_EQ(recompose(d), want);
}

TEST(DecompositionInvariants, ConstructorRejectsViolations) {
  EXPECT_ERRC(errc::invalid_argument,
              BirkhoffDecomposition({{0.5, {0, 1}}}, 2));  // weights != 1
  EXPECT_ERRC(errc::invalid_argument,
              BirkhoffDecomposition(
                  {{0.5, {0, 1}}, {0.5, {0, 1}}}, 2));  // duplicate
  EXPECT_ERRC(errc::invalid_argument,
              BirkhoffDecomposition({{1.0, {0, 0}}}, 2));  // not a bijection
  EXPECT_ERRC(
      errc::invalid_argument,
      BirkhoffDecomposition({{1.0, {0, 1}}, {0.25, {1, 0}}}, 2));  // sum > 1
}

TEST(SamplePermutation, SingleTermAlwaysReturned) {
  const BirkhoffDecomposition d({{1.0, {1, 2, 0}}}, 3);
  SeedStream s(31);
  for (int i = 0; i < 10; ++i) {
    EXPECT_EQ(sample_permutation(d, s), (std::vector<int>{1, 2, 0}));
  }
}

TEST(SamplePermutation, FrequenciesMatchWeights) {
  const auto d = decompose(perfect_secrecy_matrix(3));
  ASSERT_EQ(d.terms().size(), 3u);
  SeedStream s(32);
  std::vector<int> counts(3, 0);
  const int draws = 30000;
  for (int i = 0; i < draws; ++i) {
    const auto perm = sample_permutation(d, s);
    for (int j = 0; j < 3; ++j) {
      if (perm == d.terms()[j].permutation) {
        ++counts[j];
        break;
      }
    }
  }
  for (int j = 0; j < 3; ++j) {
    EXPECT_NEAR(double(counts[j]) / draws, 1.0 / 3.0, 0.01);
  }
}

TEST(SamplePermutation, FixedSeedReproduces) {
  const auto d = decompose(dp_matrix(4, 1.0));
  SeedStream a(33);
  SeedStream b(33);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(sample_permutation(d, a), sample_permutation(d, b));
  }
}

TEST(DecomposeProperties, RoundTripBoundAndWeights) {
  SeedStream s(34);
  for (int trial = 0; trial < 200; ++trial) {
    const int r = 2 + trial % 19;  // sizes 2..20
    const auto m = random_bistochastic(r, s);
    const auto d = decompose(m);
    EXPECT_LE(static_cast<long>(d.terms().size()),
              long(r) * r - 2L * r + 2L);
    EXPECT_NEAR(weight_sum(d), 1.0, 1e-9);
    const double err = (recompose(d) - m.entries()).cwiseAbs().maxCoeff();
    EXPECT_LE(err, 1e-8);
  }
}

TEST(DecomposeProperties, Deterministic) {
  SeedStream s(35);
  for (int trial = 0; trial < 20; ++trial) {
    const int r = 2 + int(s.next_u64() % 9);
    const auto m = random_bistochastic(r, s);
    const auto d1 = decompose(m);
    const auto d2 = decompose(m);
    ASSERT_EQ(d1.terms().size(), d2.terms().size());
    for (std::size_t j = 0; j < d1.terms().size(); ++j) {
      EXPECT_EQ(d1.terms()[j].weight, d2.terms()[j].weight);
      EXPECT_EQ(d1.terms()[j].permutation, d2.terms()[j].permutation);
    }
  }
}

TEST(Serialization, LineFormat) {
  const BirkhoffDecomposition d({{0.25, {1, 0}}, {0.75, {0, 1}}}, 2);
  EXPECT_EQ(d.to_lines(), "0.25; 1 0\n0.75; 0 1\n");
}

}  // namespace
}  // namespace bistopriv
