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

// Finite-difference check of the full training loss on small random graphs.

#ifndef AUGCLUST_TESTS_PIPELINE_CHECK_H_
#define AUGCLUST_TESTS_PIPELINE_CHECK_H_

#include <cstdint>
#include <random>

#include "augclust/graph.h"
#include "augclust/train.h"
#include "test_util.h"

namespace augclust::testing {

struct PipelineInstance {
  Graph graph;
  TrainConfig config;
};

// N nodes in two planted groups, none isolated, D attributes, k = 2.
inline PipelineInstance SmallInstance(std::uint64_t seed, StructureKind s,
                                      AttributeKind a, Index n = 8,
                                      Index d = 5) {
  std::mt19937_64 rng(seed);
  std::vector<int> labels(n);
  for (Index i = 0; i < n; ++i) labels[i] = i < n / 2 ? 0 : 1;
  Matrix adjacency = Matrix::Zero(n, n);
  std::bernoulli_distribution same(0.6), cross(0.15);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (labels[i] == labels[j] ? same(rng) : cross(rng)) {
        adjacency(i, j) = adjacency(j, i) = 1.0;
      }
    }
  }
  // An isolated node feeds the MLP structure augmentor a zero row. With zero
  // biases its embedding is then exactly zero, where cosine similarity is
  // discontinuous, so attach it to a random member of its group.
  for (Index i = 0; i < n; ++i) {
    if (adjacency.row(i).sum() > 0.0) continue;
    const Index base = labels[i] == 0 ? 0 : n / 2;
    const Index size = labels[i] == 0 ? n / 2 : n - n / 2;
    Index j = i;
    while (j == i) j = base + static_cast<Index>(rng() % size);
    adjacency(i, j) = adjacency(j, i) = 1.0;
  }
  Matrix features = RandomMatrix(n, d, rng);
  for (Index i = 0; i < n; ++i) features(i, labels[i] % d) += 1.5;
  PipelineInstance out{
      MakeGraphFromAdjacency(std::move(features), adjacency, labels, 2), {}};
  out.config.num_clusters = 2;
  out.config.seed = seed;
  out.config.hidden_dim = 8;
  out.config.embedding_dim = 6;
  out.config.structure_augmentor = s;
  out.config.attribute_augmentor = a;
  return out;
}

// CheckGradients over every model parameter of the total loss. With `refine`
// set, the pseudo-label matrix is computed once from the initial
// parameters and held fixed, as it is during a training step.
inline GradientCheck PipelineGradientCheck(const PipelineInstance& instance,
                                           bool refine) {
  Model model(instance.config, instance.graph);
  Matrix agreement;
  if (refine) {
    Tape tape;
    ViewOutputs views = model.Forward(tape);
    const Matrix fused = Fuse(views.first.value(), views.second.value());
    const ClusterResult clusters =
        KMeans(fused, 2, EpochSeed(instance.config.seed, 0));
    const PseudoLabels pseudo =
        ConfidenceSelect(fused, clusters.centroids, instance.config.tau,
                         instance.config.confidence_rule);
    agreement = PseudoLabelMatrix(pseudo.labels, pseudo.mask);
  }
  return CheckGradients(model.parameters(), [&](Tape& tape) {
    ViewOutputs views = model.Forward(tape);
    return model.Loss(views, refine ? &agreement : nullptr).total;
  });
}

inline double PipelineGradientError(const PipelineInstance& instance,
                                    bool refine) {
  return PipelineGradientCheck(instance, refine).max_error;
}

}  // namespace augclust::testing

#endif  // AUGCLUST_TESTS_PIPELINE_CHECK_H_
