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

#include "augclust/encoder.h"

#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "augclust/graph.h"
#include "test_util.h"

namespace augclust {
namespace {

using testing::MaxGradientError;
using testing::RandomMatrix;
using testing::RandomSymmetricBinary;
using testing::WeightedSum;

TEST(EncoderTest, RowsHaveUnitNorm) {
  std::mt19937_64 rng(1);
  Encoder encoder(5, 3, 2, rng);
  Tape tape;
  Var out = encoder.Encode(tape, tape.Constant(RandomSymmetricBinary(6, 0.5, rng)),
                           tape.Constant(RandomMatrix(6, 5, rng)));
  for (Index i = 0; i < 6; ++i) EXPECT_NEAR(out.value().row(i).norm(), 1.0, 1e-14);
}

TEST(EncoderTest, DepthZeroIdentityWeightReturnsNormalizedRows) {
  std::mt19937_64 rng(2);
  Encoder encoder(3, 3, 0, rng);
  encoder.parameters()[0]->value = Matrix::Identity(3, 3);
  Matrix x = RandomMatrix(4, 3, rng);
  x.rowwise().normalize();
  Tape tape;
  Var out = encoder.Encode(tape, tape.Constant(Matrix::Zero(4, 4)),
                           tape.Constant(x));
  EXPECT_LT((out.value() - x).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(EncoderTest, MatchesPipelineOracle) {
  std::mt19937_64 rng(3);
  Encoder encoder(5, 2, 2, rng);
  const Matrix a = RandomSymmetricBinary(4, 0.6, rng);
  const Matrix x = RandomMatrix(4, 5, rng);
  const Matrix w = encoder.parameters()[0]->value;
  // normalize -> filter -> linear -> normalize, composed independently.
  const Matrix filtered = GraphFilter(Normalize(a), x, 2);
  Matrix expected = filtered * w;
  expected.rowwise().normalize();
  Tape tape;
  Var out = encoder.Encode(tape, tape.Constant(a), tape.Constant(x));
  EXPECT_LT((out.value() - expected).cwiseAbs().maxCoeff(), 1e-13);
  Tape tape2;
  Var pre = encoder.EncodeFiltered(tape2, encoder.Filter(a, x));
  EXPECT_LT((pre.value() - expected).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(EncoderTest, PermutationEquivariant) {
  std::mt19937_64 rng(4);
  const Index n = 8;
  Encoder encoder(4, 3, 2, rng);
  const Matrix a = RandomSymmetricBinary(n, 0.4, rng);
  const Matrix x = RandomMatrix(n, 4, rng);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Matrix pa(n, n), px(n, 4);
  for (Index i = 0; i < n; ++i) {
    px.row(i) = x.row(perm[i]);
    for (Index j = 0; j < n; ++j) pa(i, j) = a(perm[i], perm[j]);
  }
  Tape tape;
  const Matrix base =
      encoder.Encode(tape, tape.Constant(a), tape.Constant(x)).value();
  const Matrix permuted =
      encoder.Encode(tape, tape.Constant(pa), tape.Constant(px)).value();
  for (Index i = 0; i < n; ++i) {
    EXPECT_LT((permuted.row(i) - base.row(perm[i])).cwiseAbs().maxCoeff(),
              1e-13);
  }
}

TEST(EncoderTest, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(5);
  Encoder encoder(4, 3, 2, rng);
  // Weighted structure and attributes as trainable inputs too.
  Parameter s("s", RandomMatrix(6, 6, rng, 0.0, 1.0));
  Parameter x("x", RandomMatrix(6, 4, rng));
  const Matrix weights = RandomMatrix(6, 3, rng);
  std::vector<Parameter*> params = encoder.parameters();
  params.push_back(&s);
  params.push_back(&x);
  const double err = MaxGradientError(params, [&](Tape& t) {
    Var sv = t.Leaf(&s);
    Var sym = Scale(Add(sv, Transpose(sv)), 0.5);
    return WeightedSum(t, encoder.Encode(t, sym, t.Leaf(&x)), weights);
  });
  EXPECT_LT(err, 1e-5);
}

TEST(FuseTest, Examples) {
  Matrix f(2, 2);
  f << 0.6, 0.8, -1, 0;
  EXPECT_EQ(Fuse(f, f), f);
  EXPECT_EQ(Fuse(f, Matrix(-f)), Matrix::Zero(2, 2));
  Matrix a(1, 2), b(1, 2);
  a << 1, 0;
  b << 0, 1;
  EXPECT_EQ(Fuse(a, b), Matrix::Constant(1, 2, 0.5));
  Tape tape;
  EXPECT_EQ(Fuse(tape.Constant(a), tape.Constant(b)).value(),
            Matrix::Constant(1, 2, 0.5));
  EXPECT_THROW(Fuse(a, f), DimensionError);
}

}  // namespace
}  // namespace augclust
