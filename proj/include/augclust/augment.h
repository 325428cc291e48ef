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

// Learnable augmentors that produce the second view (structure + attributes)
// of a graph, and the fixed perturbations they are compared against.

#ifndef AUGCLUST_AUGMENT_H_
#define AUGCLUST_AUGMENT_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "augclust/autodiff.h"
#include "augclust/graph.h"

namespace augclust {

enum class StructureKind { kMlp, kGcn, kAttention };
enum class AttributeKind { kMlp, kAttention };

std::string ToString(StructureKind kind);
std::string ToString(AttributeKind kind);

// Uniform in +-sqrt(6 / (fan_in + fan_out)).
Matrix GlorotUniform(Index fan_in, Index fan_out, std::mt19937_64& rng);

// Two-layer perceptron: relu(x w1 + b1) w2 + b2.
struct MlpWeights {
  Var w1;
  Var b1;
  Var w2;
  Var b2;
};

Var Mlp(const Var& input, const MlpWeights& weights);

// F = MLP(adjacency rows); relu(cos(F_i, F_j)).
Var MlpStructure(const Var& adjacency, const MlpWeights& weights);

// F = relu(a_hat X W); relu(cos(F_i, F_j)).
Var GcnStructure(const Var& a_hat, const Var& features, const Var& weight);

// H = X W. For (i, j) in the support of `support` (typically A + I) the
// score is leaky_relu(n_src . H_i + n_dst . H_j), softmax-normalized over
// row i; entries outside the support are 0. `attention` is hidden x 2 with
// columns n_src and n_dst.
Var AttentionStructure(const Var& features, const Matrix& support,
                       const Var& weight, const Var& attention);

// Output has the same shape as the features.
Var MlpAttribute(const Var& features, const MlpWeights& weights);

// softmax((X Wk^T)(X Wq^T)^T / sqrt(D)) (X Wv^T), i.e. softmax(K^T Q / sqrt D)
// V^T with Q = Wq X^T, K = Wk X^T, V = Wv X^T.
Var AttentionAttribute(const Var& features, const Var& w_query,
                       const Var& w_key, const Var& w_value);

// The original graph recorded as constants on one tape.
struct GraphContext {
  Var features;
  Var adjacency;
  Var a_hat;
  const Matrix* support = nullptr;  // A + I
};

// `normalized` must outlive the returned context.
GraphContext MakeContext(Tape& tape, const Graph& graph,
                         const NormalizedGraph& normalized);

class StructureAugmentor {
 public:
  StructureAugmentor(StructureKind kind, Index num_nodes, Index dim,
                     Index hidden_dim, std::mt19937_64& rng);

  // N x N learned structure with entries in [0, 1].
  Var Forward(Tape& tape, const GraphContext& context);

  StructureKind kind() const { return kind_; }
  std::vector<Parameter*> parameters();

 private:
  StructureKind kind_;
  std::vector<Parameter> params_;
};

class AttributeAugmentor {
 public:
  AttributeAugmentor(AttributeKind kind, Index dim, Index hidden_dim,
                     std::mt19937_64& rng);

  // N x D learned attributes.
  Var Forward(Tape& tape, const GraphContext& context);

  AttributeKind kind() const { return kind_; }
  std::vector<Parameter*> parameters();

 private:
  AttributeKind kind_;
  std::vector<Parameter> params_;
};

enum class BaselineKind { kMaskFeature, kDropEdges, kAddEdges, kDiffusion };

std::string ToString(BaselineKind kind);

// A fixed second view. `structure` is a binary adjacency for the edge
// perturbations and a dense diffusion matrix for kDiffusion.
struct BaselineView {
  Matrix structure;
  Matrix features;
};

// rate in [0, 1]. Edge counts use floor(rate * |E|). Diffusion returns the
// personalized PageRank matrix rate * (I - (1 - rate) a_hat)^-1; rate 0
// leaves every kind unchanged. Deterministic for a given seed.
BaselineView BaselineAugment(const Graph& graph, BaselineKind kind, double rate,
                             std::uint64_t seed);

}  // namespace augclust

#endif  // AUGCLUST_AUGMENT_H_
