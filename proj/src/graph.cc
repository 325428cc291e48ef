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

#include "augclust/graph.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>

namespace augclust {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string Where(const std::string& path, int line) {
  return path + ":" + std::to_string(line);
}

std::ifstream OpenOrThrow(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

template <typename T>
bool ParseNumber(std::string_view token, T& out) {
  token = Trim(token);
  if (token.empty()) return false;
  if (token.front() == '+') token.remove_prefix(1);
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end;
}

Matrix ReadAttributes(const std::string& path) {
  std::ifstream in = OpenOrThrow(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = Trim(line);
    if (view.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = view.find(',', start);
      const std::string_view token = view.substr(
          start, comma == std::string_view::npos ? view.npos : comma - start);
      double value = 0.0;
      if (!ParseNumber(token, value) || !std::isfinite(value)) {
        throw DataError(Where(path, line_no) + ": malformed attribute '" +
                        std::string(Trim(token)) + "'");
      }
      row.push_back(value);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw DataError(Where(path, line_no) + ": ragged attribute row (" +
                      std::to_string(row.size()) + " values, expected " +
                      std::to_string(rows.front().size()) + ")");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError(path + ": no attribute rows");
  Matrix features(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) features(i, j) = rows[i][j];
  }
  return features;
}

std::vector<Edge> ReadEdges(const std::string& path, Index num_nodes) {
  std::ifstream in = OpenOrThrow(path);
  std::vector<Edge> edges;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    std::istringstream fields{std::string(Trim(line))};
    std::string a, b, extra;
    int u = 0;
    int v = 0;
    if (!(fields >> a >> b) || (fields >> extra) || !ParseNumber(a, u) ||
        !ParseNumber(b, v)) {
      throw DataError(Where(path, line_no) + ": malformed edge line '" +
                      line + "'");
    }
    if (u < 0 || v < 0 || u >= num_nodes || v >= num_nodes) {
      throw DataError(Where(path, line_no) + ": node id out of range [0, " +
                      std::to_string(num_nodes) + ")");
    }
    edges.emplace_back(u, v);
  }
  return edges;
}

std::vector<int> ReadLabels(const std::string& path) {
  std::ifstream in = OpenOrThrow(path);
  std::vector<int> labels;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    int label = 0;
    if (!ParseNumber(Trim(line), label)) {
      throw DataError(Where(path, line_no) + ": malformed label '" + line +
                      "'");
    }
    labels.push_back(label);
  }
  return labels;
}

void CheckLabels(const std::vector<int>& labels, Index num_nodes,
                 int& num_clusters) {
  if (labels.empty()) return;
  if (static_cast<Index>(labels.size()) != num_nodes) {
    throw DataError("label count " + std::to_string(labels.size()) +
                    " does not match node count " + std::to_string(num_nodes));
  }
  const int max_label = *std::max_element(labels.begin(), labels.end());
  const int min_label = *std::min_element(labels.begin(), labels.end());
  if (min_label < 0) throw DataError("negative label");
  if (num_clusters == 0) num_clusters = max_label + 1;
  if (max_label >= num_clusters) {
    throw DataError("label " + std::to_string(max_label) + " outside [0, " +
                    std::to_string(num_clusters) + ")");
  }
}

std::string FormatDouble(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

}  // namespace

Graph MakeGraph(Matrix features, const std::vector<Edge>& edges,
                std::vector<int> labels, int num_clusters) {
  const Index n = features.rows();
  RequireFinite(features, "features");
  std::set<Edge> unique;
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw DataError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                      ") out of range");
    }
    if (u == v) continue;
    unique.emplace(std::min(u, v), std::max(u, v));
  }
  Graph graph;
  graph.adjacency = Matrix::Zero(n, n);
  for (auto [u, v] : unique) {
    graph.adjacency(u, v) = 1.0;
    graph.adjacency(v, u) = 1.0;
  }
  graph.edges.assign(unique.begin(), unique.end());
  graph.features = std::move(features);
  CheckLabels(labels, n, num_clusters);
  graph.labels = std::move(labels);
  graph.num_clusters = num_clusters;
  return graph;
}

Graph MakeGraphFromAdjacency(Matrix features, const Matrix& adjacency,
                             std::vector<int> labels, int num_clusters) {
  if (adjacency.rows() != features.rows() ||
      adjacency.cols() != features.rows()) {
    throw DimensionError("adjacency " + ShapeString(adjacency) +
                         " does not match " +
                         std::to_string(features.rows()) + " nodes");
  }
  std::vector<Edge> edges;
  for (Index i = 0; i < adjacency.rows(); ++i) {
    for (Index j = i + 1; j < adjacency.cols(); ++j) {
      if (adjacency(i, j) != adjacency(j, i)) {
        throw DataError("adjacency is not symmetric");
      }
      if (adjacency(i, j) != 0.0 && adjacency(i, j) != 1.0) {
        throw DataError("adjacency is not binary");
      }
      if (adjacency(i, j) == 1.0) {
        edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
      }
    }
  }
  return MakeGraph(std::move(features), edges, std::move(labels),
                   num_clusters);
}

Graph LoadGraph(const std::string& attr_path, const std::string& edge_path,
                const std::optional<std::string>& label_path,
                int num_clusters) {
  Matrix features = ReadAttributes(attr_path);
  std::vector<Edge> edges = ReadEdges(edge_path, features.rows());
  std::vector<int> labels;
  if (label_path) labels = ReadLabels(*label_path);
  return MakeGraph(std::move(features), edges, std::move(labels),
                   num_clusters);
}

void WriteGraph(const Graph& graph, const std::string& attr_path,
                const std::string& edge_path,
                const std::optional<std::string>& label_path) {
  std::ofstream attr(attr_path);
  if (!attr) throw DataError("cannot write " + attr_path);
  for (Index i = 0; i < graph.features.rows(); ++i) {
    for (Index j = 0; j < graph.features.cols(); ++j) {
      if (j > 0) attr << ',';
      attr << FormatDouble(graph.features(i, j));
    }
    attr << '\n';
  }
  std::ofstream edge_out(edge_path);
  if (!edge_out) throw DataError("cannot write " + edge_path);
  for (auto [u, v] : graph.edges) edge_out << u << '\t' << v << '\n';
  if (label_path) {
    std::ofstream label_out(*label_path);
    if (!label_out) throw DataError("cannot write " + *label_path);
    for (int label : graph.labels) label_out << label << '\n';
  }
}

void NormalizeFeatures(Matrix& features, FeatureNorm norm) {
  if (norm == FeatureNorm::kNone) return;
  for (Index i = 0; i < features.rows(); ++i) {
    const double scale = norm == FeatureNorm::kRowL1
                             ? features.row(i).cwiseAbs().sum()
                             : features.row(i).norm();
    if (scale > 0.0) features.row(i) /= scale;
  }
}

NormalizedGraph Normalize(const Matrix& adjacency) {
  if (adjacency.rows() != adjacency.cols()) {
    throw DimensionError("Normalize: adjacency not square " +
                         ShapeString(adjacency));
  }
  const Index n = adjacency.rows();
  NormalizedGraph out;
  out.a_tilde = adjacency + Matrix::Identity(n, n);
  out.degree = out.a_tilde.rowwise().sum();
  if ((out.degree.array() <= 0.0).any()) {
    throw NumericError("Normalize: non-positive degree");
  }
  Vector inv_sqrt = out.degree.array().rsqrt();
  out.a_hat = inv_sqrt.asDiagonal() * out.a_tilde * inv_sqrt.asDiagonal();
  out.laplacian = Matrix::Identity(n, n) - out.a_hat;
  return out;
}

Matrix GraphFilter(const NormalizedGraph& graph, const Matrix& features,
                   int depth) {
  if (depth < 0) throw std::invalid_argument("GraphFilter: negative depth");
  if (graph.a_hat.cols() != features.rows()) {
    throw DimensionError("GraphFilter: " + ShapeString(graph.a_hat) + " * " +
                         ShapeString(features));
  }
  Matrix smoothed = features;
  for (int step = 0; step < depth; ++step) {
    smoothed = graph.a_hat * smoothed;
  }
  return smoothed;
}

}  // namespace augclust
