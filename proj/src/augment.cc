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

#include "augclust/augment.h"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numeric>

namespace augclust {
namespace {

Matrix UniformMatrix(Index rows, Index cols, double bound,
                     std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = dist(rng);
  }
  return m;
}

std::vector<Parameter*> Pointers(std::vector<Parameter>& params) {
  std::vector<Parameter*> out;
  for (Parameter& p : params) out.push_back(&p);
  return out;
}

MlpWeights MlpLeaves(Tape& tape, std::vector<Parameter>& params) {
  return {tape.Leaf(&params[0]), tape.Leaf(&params[1]),
          tape.Leaf(&params[2]), tape.Leaf(&params[3])};
}

std::vector<Parameter> MlpParameters(const std::string& prefix, Index in,
                                     Index hidden, Index out,
                                     std::mt19937_64& rng) {
  std::vector<Parameter> params;
  params.emplace_back(prefix + ".w1", GlorotUniform(in, hidden, rng));
  params.emplace_back(prefix + ".b1", Matrix::Zero(1, hidden));
  params.emplace_back(prefix + ".w2", GlorotUniform(hidden, out, rng));
  params.emplace_back(prefix + ".b2", Matrix::Zero(1, out));
  return params;
}

void RequireSquare(const Var& v, const char* what) {
  if (v.rows() != v.cols()) {
    throw DimensionError(std::string(what) + ": expected square matrix, got " +
                         ShapeString(v.value()));
  }
}

}  // namespace

std::string ToString(StructureKind kind) {
  switch (kind) {
    case StructureKind::kMlp:
      return "mlp";
    case StructureKind::kGcn:
      return "gcn";
    case StructureKind::kAttention:
      return "attention";
  }
  return "?";
}

std::string ToString(AttributeKind kind) {
  return kind == AttributeKind::kMlp ? "mlp" : "attention";
}

std::string ToString(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kMaskFeature:
      return "mask_feature";
    case BaselineKind::kDropEdges:
      return "drop_edges";
    case BaselineKind::kAddEdges:
      return "add_edges";
    case BaselineKind::kDiffusion:
      return "diffusion";
  }
  return "?";
}

Matrix GlorotUniform(Index fan_in, Index fan_out, std::mt19937_64& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  return UniformMatrix(fan_in, fan_out, bound, rng);
}

Var Mlp(const Var& input, const MlpWeights& w) {
  Var hidden =
      Activate(AddRowBroadcast(MatMul(input, w.w1), w.b1), Activation::kRelu);
  return AddRowBroadcast(MatMul(hidden, w.w2), w.b2);
}

Var MlpStructure(const Var& adjacency, const MlpWeights& weights) {
  RequireSquare(adjacency, "MlpStructure");
  Var embedding = Mlp(adjacency, weights);
  return Activate(CosineSimilarity(embedding, embedding), Activation::kRelu);
}

Var GcnStructure(const Var& a_hat, const Var& features, const Var& weight) {
  RequireSquare(a_hat, "GcnStructure");
  Var embedding =
      Activate(MatMul(a_hat, MatMul(features, weight)), Activation::kRelu);
  return Activate(CosineSimilarity(embedding, embedding), Activation::kRelu);
}

Var AttentionStructure(const Var& features, const Matrix& support,
                       const Var& weight, const Var& attention) {
  if (support.rows() != features.rows() || support.cols() != features.rows()) {
    throw DimensionError("AttentionStructure: support " +
                         ShapeString(support) + " for " +
                         std::to_string(features.rows()) + " nodes");
  }
  if (attention.cols() != 2 || attention.rows() != weight.cols()) {
    throw DimensionError("AttentionStructure: attention vector " +
                         ShapeString(attention.value()) + " for hidden " +
                         std::to_string(weight.cols()));
  }
  Var hidden = MatMul(features, weight);
  Var halves = MatMul(hidden, attention);  // N x 2
  Var scores = OuterSum(SelectColumn(halves, 0), SelectColumn(halves, 1));
  return MaskedRowSoftmax(Activate(scores, Activation::kLeakyRelu), support);
}

Var MlpAttribute(const Var& features, const MlpWeights& weights) {
  Var out = Mlp(features, weights);
  if (out.cols() != features.cols()) {
    throw DimensionError("MlpAttribute: output width " +
                         std::to_string(out.cols()) + " != " +
                         std::to_string(features.cols()));
  }
  return out;
}

Var AttentionAttribute(const Var& features, const Var& w_query,
                       const Var& w_key, const Var& w_value) {
  const Index dim = features.cols();
  for (const Var* w : {&w_query, &w_key, &w_value}) {
    if (w->rows() != dim || w->cols() != dim) {
      throw DimensionError("AttentionAttribute: weight " +
                           ShapeString(w->value()) + " for dimension " +
                           std::to_string(dim));
    }
  }
  Var queries = MatMulTransposed(features, w_query);  // Q^T, N x D
  Var keys = MatMulTransposed(features, w_key);       // K^T, N x D
  Var values = MatMulTransposed(features, w_value);   // V^T, N x D
  Var weights = RowSoftmax(MatMulTransposed(keys, queries),
                           1.0 / std::sqrt(static_cast<double>(dim)));
  return MatMul(weights, values);
}

GraphContext MakeContext(Tape& tape, const Graph& graph,
                         const NormalizedGraph& normalized) {
  GraphContext context;
  context.features = tape.Constant(graph.features);
  context.adjacency = tape.Constant(graph.adjacency);
  context.a_hat = tape.Constant(normalized.a_hat);
  context.support = &normalized.a_tilde;
  return context;
}

StructureAugmentor::StructureAugmentor(StructureKind kind, Index num_nodes,
                                       Index dim, Index hidden_dim,
                                       std::mt19937_64& rng)
    : kind_(kind) {
  switch (kind) {
    case StructureKind::kMlp:
      params_ = MlpParameters("structure.mlp", num_nodes, hidden_dim,
                              hidden_dim, rng);
      break;
    case StructureKind::kGcn:
      params_.emplace_back("structure.gcn.w",
                           GlorotUniform(dim, hidden_dim, rng));
      break;
    case StructureKind::kAttention: {
      params_.emplace_back("structure.attention.w",
                           GlorotUniform(dim, hidden_dim, rng));
      // n is a 2h vector stored as two columns.
      const double bound = std::sqrt(6.0 / static_cast<double>(2 * hidden_dim + 1));
      params_.emplace_back("structure.attention.n",
                           UniformMatrix(hidden_dim, 2, bound, rng));
      break;
    }
  }
}

Var StructureAugmentor::Forward(Tape& tape, const GraphContext& context) {
  switch (kind_) {
    case StructureKind::kMlp:
      return MlpStructure(context.adjacency, MlpLeaves(tape, params_));
    case StructureKind::kGcn:
      return GcnStructure(context.a_hat, context.features,
                          tape.Leaf(&params_[0]));
    case StructureKind::kAttention:
      return AttentionStructure(context.features, *context.support,
                                tape.Leaf(&params_[0]),
                                tape.Leaf(&params_[1]));
  }
  throw std::logic_error("unknown structure augmentor");
}

std::vector<Parameter*> StructureAugmentor::parameters() {
  return Pointers(params_);
}

AttributeAugmentor::AttributeAugmentor(AttributeKind kind, Index dim,
                                       Index hidden_dim, std::mt19937_64& rng)
    : kind_(kind) {
  if (kind == AttributeKind::kMlp) {
    params_ = MlpParameters("attribute.mlp", dim, hidden_dim, dim, rng);
  } else {
    params_.emplace_back("attribute.attention.wq", GlorotUniform(dim, dim, rng));
    params_.emplace_back("attribute.attention.wk", GlorotUniform(dim, dim, rng));
    params_.emplace_back("attribute.attention.wv", GlorotUniform(dim, dim, rng));
  }
}

Var AttributeAugmentor::Forward(Tape& tape, const GraphContext& context) {
  if (kind_ == AttributeKind::kMlp) {
    return MlpAttribute(context.features, MlpLeaves(tape, params_));
  }
  return AttentionAttribute(context.features, tape.Leaf(&params_[0]),
                            tape.Leaf(&params_[1]), tape.Leaf(&params_[2]));
}

std::vector<Parameter*> AttributeAugmentor::parameters() {
  return Pointers(params_);
}

BaselineView BaselineAugment(const Graph& graph, BaselineKind kind, double rate,
                             std::uint64_t seed) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw std::invalid_argument("BaselineAugment: rate must lie in [0, 1]");
  }
  BaselineView view{graph.adjacency, graph.features};
  if (rate == 0.0) return view;
  std::mt19937_64 rng(seed);
  const Index n = graph.num_nodes();
  const auto edge_budget = static_cast<std::size_t>(
      std::floor(rate * static_cast<double>(graph.edges.size())));

  switch (kind) {
    case BaselineKind::kMaskFeature: {
      const Index dim = graph.dim();
      const auto masked = static_cast<Index>(std::floor(rate * dim));
      std::vector<Index> columns(dim);
      std::iota(columns.begin(), columns.end(), Index{0});
      for (Index i = 0; i < n; ++i) {
        std::shuffle(columns.begin(), columns.end(), rng);
        for (Index c = 0; c < masked; ++c) view.features(i, columns[c]) = 0.0;
      }
      break;
    }
    case BaselineKind::kDropEdges: {
      std::vector<Edge> edges = graph.edges;
      std::shuffle(edges.begin(), edges.end(), rng);
      for (std::size_t e = 0; e < edge_budget; ++e) {
        auto [u, v] = edges[e];
        view.structure(u, v) = 0.0;
        view.structure(v, u) = 0.0;
      }
      break;
    }
    case BaselineKind::kAddEdges: {
      std::vector<Edge> candidates;
      for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
          if (graph.adjacency(i, j) == 0.0) {
            candidates.emplace_back(static_cast<int>(i), static_cast<int>(j));
          }
        }
      }
      if (candidates.size() < edge_budget) {
        throw DataError("add_edges: only " + std::to_string(candidates.size()) +
                        " non-edges available, need " +
                        std::to_string(edge_budget));
      }
      std::vector<Edge> chosen;
      std::sample(candidates.begin(), candidates.end(),
                  std::back_inserter(chosen), edge_budget, rng);
      for (auto [u, v] : chosen) {
        view.structure(u, v) = 1.0;
        view.structure(v, u) = 1.0;
      }
      break;
    }
    case BaselineKind::kDiffusion: {
      const NormalizedGraph normalized = Normalize(graph.adjacency);
      Matrix system = Matrix::Identity(n, n) - (1.0 - rate) * normalized.a_hat;
      Eigen::PartialPivLU<Matrix> lu(system);
      view.structure = rate * lu.solve(Matrix::Identity(n, n));
      RequireFinite(view.structure, "diffusion");
      break;
    }
  }
  return view;
}

}  // namespace augclust
