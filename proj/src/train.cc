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

#include "augclust/train.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace augclust {
namespace {

void Require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

int ResolveClusters(const TrainConfig& config, const Graph& graph) {
  const int k = config.num_clusters > 0 ? config.num_clusters
                                        : graph.num_clusters;
  if (k < 2 || k > graph.num_nodes()) {
    throw ConfigError("k: need 2 <= k <= N, got k=" + std::to_string(k));
  }
  return k;
}

const TrainConfig& Validated(const TrainConfig& config) {
  config.Validate();
  return config;
}

std::vector<Parameter*> Concat(std::vector<Parameter*> a,
                               const std::vector<Parameter*>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

void TrainConfig::Validate() const {
  Require(num_clusters == 0 || num_clusters >= 2, "k: must be >= 2");
  Require(alpha >= 0.0, "alpha: must be >= 0");
  Require(tau > 0.0 && tau <= 1.0, "tau: must lie in (0, 1]");
  Require(temp > 0.0, "temp: must be > 0");
  Require(lr > 0.0, "lr: must be > 0");
  Require(epochs >= 0, "epochs: must be >= 0");
  Require(stage2_start >= 0 && stage2_start <= epochs,
          "stage2_start: must lie in [0, epochs]");
  Require(hidden_dim >= 1, "hidden_dim: must be >= 1");
  Require(embedding_dim >= 1, "embedding_dim: must be >= 1");
  Require(filter_depth >= 0 && filter_depth <= 5,
          "filter_depth: must lie in [0, 5]");
  Require(grad_clip >= 0.0, "grad_clip: must be >= 0 (0 disables)");
  Require(kmeans_restarts >= 1, "kmeans_restarts: must be >= 1");
}

Var AugmentationLoss(const Var& adjacency, const Var& features,
                     const Var& aug_s, const Var& aug_x) {
  Var structure = SquaredNorm(Sub(adjacency, aug_s));
  Var attributes = SquaredNorm(Sub(features, aug_x));
  return Scale(Add(structure, attributes), -1.0);
}

Var ContrastiveLoss(const Var& first, const Var& second, double temp,
                    NtXentVariant variant) {
  if (!(temp > 0.0)) throw std::invalid_argument("ContrastiveLoss: temp <= 0");
  const Index n = first.rows();
  if (variant == NtXentVariant::kPaper && n < 2) {
    throw std::invalid_argument(
        "ContrastiveLoss: need at least two nodes for negatives");
  }
  Var logits = Scale(MatMulTransposed(first, second), 1.0 / temp);
  const Matrix& s = logits.value();
  const bool skip_positive = variant == NtXentVariant::kPaper;
  // Row-wise softmax over the denominator's index set.
  Matrix weights = Matrix::Zero(n, n);
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    double peak = -std::numeric_limits<double>::infinity();
    for (Index k = 0; k < n; ++k) {
      if (skip_positive && k == i) continue;
      peak = std::max(peak, s(i, k));
    }
    double sum = 0.0;
    for (Index k = 0; k < n; ++k) {
      if (skip_positive && k == i) continue;
      weights(i, k) = std::exp(s(i, k) - peak);
      sum += weights(i, k);
    }
    weights.row(i) /= sum;
    total += -s(i, i) + peak + std::log(sum);
  }
  Matrix out(1, 1);
  out(0, 0) = total / static_cast<double>(n);
  return logits.tape()->Record(
      std::move(out), {logits},
      [logits, weights = std::move(weights), n](Tape& t, const Matrix&,
                                                const Matrix& g) {
        Matrix d = weights;
        d.diagonal().array() -= 1.0;
        t.Accumulate(logits, d * (g(0, 0) / static_cast<double>(n)));
      });
}

Var TotalLoss(const Var& loss_a, const Var& loss_c, double alpha) {
  return Add(loss_a, Scale(loss_c, alpha));
}

Model::Model(const TrainConfig& config, const Graph& graph,
             SecondViewSpec view)
    : config_(config),
      graph_(graph),
      normalized_(Normalize(graph.adjacency)),
      view_(std::move(view)),
      rng_(config.seed),
      encoder_(graph.dim(), config.embedding_dim, config.filter_depth, rng_) {
  const Index n = graph.num_nodes();
  if (view_.fixed_structure &&
      (view_.fixed_structure->rows() != n || view_.fixed_structure->cols() != n)) {
    throw DimensionError("second view structure " +
                         ShapeString(*view_.fixed_structure));
  }
  if (view_.fixed_features && (view_.fixed_features->rows() != n ||
                               view_.fixed_features->cols() != graph.dim())) {
    throw DimensionError("second view features " +
                         ShapeString(*view_.fixed_features));
  }
  if (view_.learn_structure) {
    structure_ = std::make_unique<StructureAugmentor>(
        config.structure_augmentor, n, graph.dim(), config.hidden_dim, rng_);
  }
  if (view_.learn_attributes) {
    attributes_ = std::make_unique<AttributeAugmentor>(
        config.attribute_augmentor, graph.dim(), config.hidden_dim, rng_);
  }
  filtered_first_ = encoder_.Filter(graph.adjacency, graph.features);
  if (!structure_ && !attributes_) {
    filtered_second_ = encoder_.Filter(
        view_.fixed_structure.value_or(graph.adjacency),
        view_.fixed_features.value_or(graph.features));
  }
}

ViewOutputs Model::Forward(Tape& tape) {
  ViewOutputs out;
  out.context = MakeContext(tape, graph_, normalized_);
  if (structure_) {
    out.aug_s = structure_->Forward(tape, out.context);
  } else {
    out.aug_s = view_.fixed_structure ? tape.Constant(*view_.fixed_structure)
                                      : out.context.adjacency;
  }
  if (attributes_) {
    out.aug_x = attributes_->Forward(tape, out.context);
  } else {
    out.aug_x = view_.fixed_features ? tape.Constant(*view_.fixed_features)
                                     : out.context.features;
  }
  out.first = encoder_.EncodeFiltered(tape, filtered_first_);
  out.second = filtered_second_
                   ? encoder_.EncodeFiltered(tape, *filtered_second_)
                   : encoder_.Encode(tape, out.aug_s, out.aug_x);
  return out;
}

LossOutputs Model::Loss(const ViewOutputs& views,
                        const Matrix* agreement) const {
  LossOutputs out;
  out.refined_s = views.aug_s;
  if (agreement != nullptr) {
    Var similarity = CrossViewSimilarity(views.first, views.second);
    out.refined_s = Refine(views.aug_s, similarity, *agreement);
  }
  out.loss_a = AugmentationLoss(views.context.adjacency, views.context.features,
                                out.refined_s, views.aug_x);
  out.loss_c = ContrastiveLoss(views.first, views.second, config_.temp,
                               config_.ntxent_variant);
  out.total = TotalLoss(out.loss_a, out.loss_c, config_.alpha);
  return out;
}

std::vector<Parameter*> Model::augmentor_parameters() {
  std::vector<Parameter*> out;
  if (structure_) out = Concat(std::move(out), structure_->parameters());
  if (attributes_) out = Concat(std::move(out), attributes_->parameters());
  return out;
}

std::vector<Parameter*> Model::encoder_parameters() {
  return encoder_.parameters();
}

std::vector<Parameter*> Model::parameters() {
  return Concat(augmentor_parameters(), encoder_parameters());
}

void Model::ZeroGrad() {
  for (Parameter* p : parameters()) p->ZeroGrad();
}

std::uint64_t EpochSeed(std::uint64_t seed, int epoch) {
  // splitmix64 finalizer over (seed, epoch).
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL *
                               static_cast<std::uint64_t>(epoch + 2);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::optional<double> PresetLearningRate(const std::string& dataset) {
  static const std::map<std::string, double> kRates = {
      {"uat", 1e-3},  {"cora", 1e-4}, {"citeseer", 1e-4},
      {"amap", 1e-5}, {"bat", 1e-5},  {"eat", 1e-7},
  };
  auto it = kRates.find(dataset);
  if (it == kRates.end()) return std::nullopt;
  return it->second;
}

Trainer::Trainer(const TrainConfig& config, const Graph& graph,
                 SecondViewSpec view)
    : config_(config),
      graph_(graph),
      model_(Validated(config), graph, std::move(view)),
      optimizer_(AdamOptions{.lr = config.lr}) {
  config_.num_clusters = ResolveClusters(config, graph);
  if (!config.freeze_augmentors) {
    trainable_ = Concat(std::move(trainable_), model_.augmentor_parameters());
  }
  if (!config.freeze_encoder) {
    trainable_ = Concat(std::move(trainable_), model_.encoder_parameters());
  }
}

EpochRecord Trainer::TrainEpoch(int epoch) {
  EpochRecord record;
  record.epoch = epoch;
  try {
    Tape tape;
    model_.ZeroGrad();
    ViewOutputs views = model_.Forward(tape);
    Matrix fused = Fuse(views.first.value(), views.second.value());
    ClusterResult clusters =
        KMeans(fused, config_.num_clusters, EpochSeed(config_.seed, epoch));
    if (graph_.has_labels()) {
      record.metrics =
          Evaluate(graph_.labels, clusters.assignments, config_.nmi_norm);
    }
    Matrix agreement;
    if (epoch >= config_.stage2_start) {
      PseudoLabels pseudo = ConfidenceSelect(fused, clusters.centroids,
                                             config_.tau,
                                             config_.confidence_rule);
      agreement = PseudoLabelMatrix(pseudo.labels, pseudo.mask);
      record.refined = true;
      record.masked = pseudo.masked_count();
    }
    LossOutputs loss =
        model_.Loss(views, record.refined ? &agreement : nullptr);
    record.loss_total = loss.total.scalar();
    record.loss_a = loss.loss_a.scalar();
    record.loss_c = loss.loss_c.scalar();
    tape.Backward(loss.total);
    record.grad_norm = ClipGradientNorm(trainable_, config_.grad_clip);
    if (!trainable_.empty()) optimizer_.Step(trainable_);
  } catch (const NumericError& e) {
    throw NumericError("epoch " + std::to_string(epoch) + ": " + e.what());
  }
  return record;
}

TrainReport Trainer::Finish(std::vector<EpochRecord> records) {
  TrainReport report;
  report.epochs = std::move(records);
  Tape tape;
  ViewOutputs views = model_.Forward(tape);
  report.embeddings = Fuse(views.first.value(), views.second.value());
  KMeansOptions options;
  options.restarts = config_.kmeans_restarts;
  report.clusters = KMeans(report.embeddings, config_.num_clusters,
                           EpochSeed(config_.seed, -1), options);
  if (graph_.has_labels()) {
    report.metrics =
        Evaluate(graph_.labels, report.clusters.assignments, config_.nmi_norm);
  }
  return report;
}

TrainReport Train(const TrainConfig& config, const Graph& graph,
                  SecondViewSpec view) {
  const auto start = std::chrono::steady_clock::now();
  Trainer trainer(config, graph, std::move(view));
  std::vector<EpochRecord> records;
  records.reserve(config.epochs);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    records.push_back(trainer.TrainEpoch(epoch));
  }
  TrainReport report = trainer.Finish(std::move(records));
  report.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return report;
}

}  // namespace augclust
