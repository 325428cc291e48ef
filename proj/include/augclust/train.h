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

#ifndef AUGCLUST_TRAIN_H_
#define AUGCLUST_TRAIN_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "augclust/augment.h"
#include "augclust/autodiff.h"
#include "augclust/encoder.h"
#include "augclust/graph.h"
#include "augclust/kmeans.h"
#include "augclust/metrics.h"
#include "augclust/optim.h"
#include "augclust/refine.h"

namespace augclust {

enum class NtXentVariant {
  // Positive pair excluded from the denominator (sum over k != i).
  kPaper,
  // Positive pair included (sum over all k).
  kStandard,
};

struct TrainConfig {
  int num_clusters = 0;
  double alpha = 0.5;
  double tau = 0.95;
  double temp = 0.5;
  double lr = 1e-4;
  int epochs = 400;
  int stage2_start = 200;
  std::uint64_t seed = 0;
  StructureKind structure_augmentor = StructureKind::kAttention;
  AttributeKind attribute_augmentor = AttributeKind::kMlp;
  int hidden_dim = 256;
  int embedding_dim = 128;
  int filter_depth = 2;
  double grad_clip = 5.0;
  ConfidenceRule confidence_rule = ConfidenceRule::kFraction;
  NtXentVariant ntxent_variant = NtXentVariant::kPaper;
  NmiNorm nmi_norm = NmiNorm::kGeometric;
  int kmeans_restarts = 10;

  // Excluded from optimizer updates (gradients are still computed).
  bool freeze_augmentors = false;
  bool freeze_encoder = false;

  // Throws ConfigError naming the offending field.
  void Validate() const;
};

// Where the second view comes from. Components without a learnable
// augmentor use a fixed matrix: the given override, else the original graph.
struct SecondViewSpec {
  bool learn_structure = true;
  bool learn_attributes = true;
  std::optional<Matrix> fixed_structure;
  std::optional<Matrix> fixed_features;
};

// L_a = -(||A - Aug_S||^2 + ||X - Aug_X||^2).
Var AugmentationLoss(const Var& adjacency, const Var& features,
                     const Var& aug_s, const Var& aug_x);

// Mean over nodes of -log(exp(s_ii) / sum_k exp(s_ik)) with
// s = F1 F2^T / temp, k ranging over k != i (kPaper) or all k (kStandard).
// Throws std::invalid_argument for fewer than two nodes under kPaper.
Var ContrastiveLoss(const Var& first, const Var& second, double temp,
                    NtXentVariant variant);

// L = L_a + alpha L_c.
Var TotalLoss(const Var& loss_a, const Var& loss_c, double alpha);

struct ViewOutputs {
  GraphContext context;
  Var aug_s;
  Var aug_x;
  Var first;   // F^v1
  Var second;  // F^v2
};

struct LossOutputs {
  Var total;
  Var loss_a;
  Var loss_c;
  Var refined_s;  // Aug_S after refinement, or Aug_S itself
};

// Augmentors plus the shared encoder, bound to one graph. Not copyable or
// movable: parameter pointers handed to the optimizer must stay valid.
class Model {
 public:
  Model(const TrainConfig& config, const Graph& graph,
        SecondViewSpec view = {});
  Model(const Model&) = delete;
  Model& operator=(const Model&) = delete;

  // Augment and encode both views on `tape`.
  ViewOutputs Forward(Tape& tape);

  // Losses for one forward pass. With `agreement` set, Aug_S is refined by
  // the cross-view similarity and that pseudo-label matrix before L_a.
  LossOutputs Loss(const ViewOutputs& views, const Matrix* agreement) const;

  std::vector<Parameter*> parameters();
  std::vector<Parameter*> augmentor_parameters();
  std::vector<Parameter*> encoder_parameters();
  void ZeroGrad();

  const Graph& graph() const { return graph_; }
  const TrainConfig& config() const { return config_; }

 private:
  TrainConfig config_;
  const Graph& graph_;
  NormalizedGraph normalized_;
  SecondViewSpec view_;
  std::mt19937_64 rng_;
  std::unique_ptr<StructureAugmentor> structure_;
  std::unique_ptr<AttributeAugmentor> attributes_;
  // Initialized before the augmentors, so its weights are drawn first.
  Encoder encoder_;
  Matrix filtered_first_;
  std::optional<Matrix> filtered_second_;
};

struct EpochRecord {
  int epoch = 0;
  double loss_total = 0.0;
  double loss_a = 0.0;
  double loss_c = 0.0;
  double grad_norm = 0.0;
  bool refined = false;
  int masked = 0;
  std::optional<MetricReport> metrics;
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  Matrix embeddings;  // fused, N x d
  ClusterResult clusters;
  std::optional<MetricReport> metrics;
  double seconds = 0.0;
};

// One training run. Owns the model and optimizer state.
class Trainer {
 public:
  Trainer(const TrainConfig& config, const Graph& graph,
          SecondViewSpec view = {});

  // Augment, encode, fuse, cluster, refine (from stage2_start), compute the
  // losses, backpropagate, clip and step. Errors carry the epoch index.
  EpochRecord TrainEpoch(int epoch);

  // Re-encodes with the current parameters and clusters the fused
  // embeddings with config.kmeans_restarts starts.
  TrainReport Finish(std::vector<EpochRecord> records);

  Model& model() { return model_; }

 private:
  TrainConfig config_;
  const Graph& graph_;
  Model model_;
  Adam optimizer_;
  std::vector<Parameter*> trainable_;
};

TrainReport Train(const TrainConfig& config, const Graph& graph,
                  SecondViewSpec view = {});

// Per-epoch K-means seed derived from the run seed.
std::uint64_t EpochSeed(std::uint64_t seed, int epoch);

// Preset learning rates by dataset name (lower case); nullopt if unknown.
std::optional<double> PresetLearningRate(const std::string& dataset);

}  // namespace augclust

#endif  // AUGCLUST_TRAIN_H_
