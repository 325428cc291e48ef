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

#ifndef AUGCLUST_GRAPH_H_
#define AUGCLUST_GRAPH_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "augclust/matrix.h"

namespace augclust {

using Edge = std::pair<int, int>;

// An attributed undirected graph with optional ground truth.
//
// Invariants (enforced by MakeGraph): `adjacency` is symmetric, binary, with
// zero diagonal; `edges` lists each undirected edge once as (u, v), u < v,
// in lexicographic order; labels, when present, lie in [0, num_clusters).
struct Graph {
  Matrix features;
  Matrix adjacency;
  std::vector<Edge> edges;
  std::vector<int> labels;
  int num_clusters = 0;

  Index num_nodes() const { return features.rows(); }
  Index dim() const { return features.cols(); }
  bool has_labels() const { return !labels.empty(); }
};

// Builds a graph from an undirected edge list. Orientation and duplicates
// are collapsed and self-loops dropped. `num_clusters` of 0 infers the count
// from the labels. Throws DataError on out-of-range ids or labels.
Graph MakeGraph(Matrix features, const std::vector<Edge>& edges,
                std::vector<int> labels = {}, int num_clusters = 0);

// Same as MakeGraph but with a precomputed adjacency (symmetric, binary).
Graph MakeGraphFromAdjacency(Matrix features, const Matrix& adjacency,
                             std::vector<int> labels, int num_clusters);

// Attribute file: one node per line, comma-separated reals.
// Edge file: one "u<TAB>v" pair per line (any whitespace accepted), 0-based.
// Label file: one integer per line.
// Errors name the file and the 1-based line number.
Graph LoadGraph(const std::string& attr_path, const std::string& edge_path,
                const std::optional<std::string>& label_path,
                int num_clusters = 0);

void WriteGraph(const Graph& graph, const std::string& attr_path,
                const std::string& edge_path,
                const std::optional<std::string>& label_path);

enum class FeatureNorm { kNone, kRowL1, kRowL2 };

// Rescales rows in place; zero rows stay zero.
void NormalizeFeatures(Matrix& features, FeatureNorm norm);

// Renormalized operators of a (possibly weighted) adjacency.
struct NormalizedGraph {
  Vector degree;     // row sums of A + I
  Matrix a_tilde;    // A + I
  Matrix a_hat;      // D^-1/2 (A + I) D^-1/2
  Matrix laplacian;  // I - a_hat
};

NormalizedGraph Normalize(const Matrix& adjacency);
inline NormalizedGraph Normalize(const Graph& graph) {
  return Normalize(graph.adjacency);
}

// a_hat^depth * features, applied iteratively; depth 0 returns features.
Matrix GraphFilter(const NormalizedGraph& graph, const Matrix& features,
                   int depth);

}  // namespace augclust

#endif  // AUGCLUST_GRAPH_H_
