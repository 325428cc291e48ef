// Copyright 2026 The Augclust Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "augclust/refine.h"

#include <random>

#include <gtest/gtest.h>

#include "test_util.h"

namespace augclust {
namespace {

using testing::MaxGradientError;
using testing::RandomMatrix;
using testing::WeightedSum;

TEST(CrossViewSimilarityTest, Examples) {
  const Matrix eye = Matrix::Identity(3, 3);
  EXPECT_EQ(CrossViewSimilarity(eye, eye), eye);
  Matrix a(1, 2), b(1, 2);
  a << 1, 0;
  EXPECT_EQ(CrossViewSimilarity(a, Matrix(-a))(0, 0), -1.0);
  b << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  EXPECT_NEAR(CrossViewSimilarity(a, b)(0, 0), 0.7071, 5e-5);
  Tape tape;
  EXPECT_EQ(CrossViewSimilarity(tape.Constant(a), tape.Constant(b)).value(),
            CrossViewSimilarity(a, b));
}

TEST(ConfidenceSelectTest, PointOnCentroidIsConfident) {
  Matrix centroids(2, 2);
  centroids << 0, 0, 10, 10;
  Matrix points(1, 2);
  points << 0, 0;
  PseudoLabels p = ConfidenceSelect(points, centroids, 1.0, ConfidenceRule::kAbsolute);
  EXPECT_EQ(p.labels[0], 0);
  EXPECT_NEAR(p.confidence[0], 1.0, 1e-12);
  p = ConfidenceSelect(points, centroids, 0.95, ConfidenceRule::kAbsolute);
  EXPECT_TRUE(p.mask[0]);
}

TEST(ConfidenceSelectTest, EquidistantPointTiesToLowerIndex) {
  Matrix centroids(2, 1);
  centroids << -1, 1;
  Matrix points(1, 1);
  points << 0;
  PseudoLabels p =
      ConfidenceSelect(points, centroids, 0.95, ConfidenceRule::kAbsolute);
  EXPECT_EQ(p.labels[0], 0);
  EXPECT_DOUBLE_EQ(p.confidence[0], 0.5);
  EXPECT_FALSE(p.mask[0]);
}

TEST(ConfidenceSelectTest, TwoTightBlobsAllMasked) {
  Matrix points(6, 2);
  points << 0, 0, 0.1, 0, 0, 0.1, 5, 5, 5.1, 5, 5, 5.1;
  Matrix centroids(2, 2);
  centroids << 0.1 / 3, 0.1 / 3, 5 + 0.1 / 3, 5 + 0.1 / 3;
  for (ConfidenceRule rule : {ConfidenceRule::kFraction, ConfidenceRule::kAbsolute}) {
    PseudoLabels p = ConfidenceSelect(points, centroids, 0.95, rule);
    EXPECT_EQ(p.masked_count(), 6);
    EXPECT_EQ(p.labels, (std::vector<int>{0, 0, 0, 1, 1, 1}));
  }
}

TEST(ConfidenceSelectTest, FractionRuleKeepsMostConfident) {
  std::mt19937_64 rng(3);
  const Matrix points = RandomMatrix(20, 3, rng);
  const Matrix centroids = RandomMatrix(3, 3, rng);
  PseudoLabels p = ConfidenceSelect(points, centroids, 0.5, ConfidenceRule::kFraction);
  EXPECT_EQ(p.masked_count(), 10);
  double min_kept = 1.0, max_dropped = 0.0;
  for (int i = 0; i < 20; ++i) {
    if (p.mask[i]) {
      min_kept = std::min(min_kept, p.confidence[i]);
    } else {
      max_dropped = std::max(max_dropped, p.confidence[i]);
    }
  }
  EXPECT_GE(min_kept, max_dropped);
  // 0.95 of 20 is 19 nodes.
  EXPECT_EQ(ConfidenceSelect(points, centroids, 0.95, ConfidenceRule::kFraction)
                .masked_count(),
            19);
}

TEST(ConfidenceSelectTest, InvalidArgumentsThrow) {
  const Matrix points = Matrix::Zero(2, 2);
  EXPECT_THROW(ConfidenceSelect(points, Matrix::Zero(1, 2), 0.9,
                                ConfidenceRule::kFraction),
               std::invalid_argument);
  EXPECT_THROW(ConfidenceSelect(points, Matrix::Zero(2, 2), 0.0,
                                ConfidenceRule::kFraction),
               std::invalid_argument);
}

TEST(PseudoLabelMatrixTest, Examples) {
  Matrix expected(3, 3);
  expected << 1, 1, 0, 1, 1, 0, 0, 0, 1;
  EXPECT_EQ(PseudoLabelMatrix({0, 0, 1}, {true, true, true}), expected);
  EXPECT_EQ(PseudoLabelMatrix({0, 0, 1}, {false, false, false}),
            Matrix::Ones(3, 3));
  EXPECT_EQ(PseudoLabelMatrix({0, 1}, {true, false}), Matrix::Ones(2, 2));
}

TEST(RefineTest, Examples) {
  std::mt19937_64 rng(4);
  const Matrix aug_s = RandomMatrix(3, 3, rng, 0, 1);
  EXPECT_EQ(Refine(aug_s, Matrix::Ones(3, 3), Matrix::Ones(3, 3)), aug_s);
  const Matrix diag = Refine(aug_s, Matrix::Ones(3, 3), Matrix::Identity(3, 3));
  EXPECT_EQ(diag, Matrix(aug_s.diagonal().asDiagonal()));
  Matrix s2(2, 2), s(2, 2);
  s2 << 1, 0.8, 0.8, 1;
  s << 1, 0.5, 0.5, 1;
  Matrix expected(2, 2);
  expected << 1, 0.4, 0.4, 1;
  EXPECT_TRUE(Refine(s2, s, Matrix::Ones(2, 2)).isApprox(expected, 1e-15));
}

TEST(RefineTest, NegativeSimilarityIsClamped) {
  Matrix aug_s = Matrix::Constant(1, 1, 0.7);
  EXPECT_EQ(Refine(aug_s, Matrix::Constant(1, 1, -0.3), Matrix::Ones(1, 1))(0, 0),
            0.0);
  EXPECT_EQ(Refine(aug_s, Matrix::Constant(1, 1, 1.2), Matrix::Ones(1, 1))(0, 0),
            0.7);
}

TEST(RefineTest, VarMatchesMatrixAndHasGradients) {
  std::mt19937_64 rng(5);
  Parameter aug("aug", RandomMatrix(4, 4, rng, 0.05, 1));
  Parameter sim("sim", testing::RandomAwayFrom(4, 4, rng, {0.0, 1.0}));
  const Matrix z = PseudoLabelMatrix({0, 1, 0, 1}, {true, true, false, true});
  {
    Tape tape;
    EXPECT_EQ(Refine(tape.Leaf(&aug), tape.Leaf(&sim), z).value(),
              Refine(aug.value, sim.value, z));
  }
  const Matrix weights = RandomMatrix(4, 4, rng);
  EXPECT_LT(MaxGradientError({&aug, &sim}, [&](Tape& t) {
              return WeightedSum(t, Refine(t.Leaf(&aug), t.Leaf(&sim), z),
                                 weights);
            }),
            1e-5);
}

// Property checks on random states; the acceptance binary runs the same
// checks with more states.
TEST(RefineTest, RandomStatesSatisfyInvariants) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 2 + static_cast<Index>(rng() % 10);
    const Index k = 2 + static_cast<Index>(rng() % 3);
    Matrix f1 = RandomMatrix(n, 4, rng), f2 = RandomMatrix(n, 4, rng);
    f1.rowwise().normalize();
    f2.rowwise().normalize();
    const Matrix aug_s = RandomMatrix(n, n, rng, 0, 1);
    const PseudoLabels p = ConfidenceSelect(0.5 * (f1 + f2), RandomMatrix(k, 4, rng),
                                            0.6, ConfidenceRule::kFraction);
    const Matrix z = PseudoLabelMatrix(p.labels, p.mask);
    const Matrix out = Refine(aug_s, CrossViewSimilarity(f1, f2), z);
    EXPECT_EQ(z, z.transpose());
    EXPECT_EQ(z.diagonal(), Vector::Ones(n));
    EXPECT_TRUE((z.array() == 0.0 || z.array() == 1.0).all());
    EXPECT_GE(out.minCoeff(), 0.0);
    EXPECT_TRUE((out.array() <= aug_s.array()).all());
    EXPECT_EQ(PseudoLabelMatrix(p.labels, p.mask), z);
  }
}

}  // namespace
}  // namespace augclust
