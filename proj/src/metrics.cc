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

#include "augclust/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace augclust {
namespace {

void RequireSameLength(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("label vectors differ in length: " +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
  }
}

// Dense 0..m-1 codes for the distinct values, in ascending value order.
std::vector<int> Encode(std::span<const int> labels, std::vector<int>* values) {
  std::map<int, int> codes;
  for (int label : labels) codes.emplace(label, 0);
  int next = 0;
  for (auto& [value, code] : codes) code = next++;
  std::vector<int> out;
  out.reserve(labels.size());
  for (int label : labels) out.push_back(codes[label]);
  if (values != nullptr) {
    values->clear();
    for (auto& [value, code] : codes) values->push_back(value);
  }
  return out;
}

struct Contingency {
  Matrix counts;  // true classes x predicted clusters
  Vector row_sums;
  Vector col_sums;
  double total = 0.0;
};

Contingency Tabulate(std::span<const int> truth, std::span<const int> pred) {
  std::vector<int> t = Encode(truth, nullptr);
  std::vector<int> p = Encode(pred, nullptr);
  const int rows = t.empty() ? 0 : *std::max_element(t.begin(), t.end()) + 1;
  const int cols = p.empty() ? 0 : *std::max_element(p.begin(), p.end()) + 1;
  Contingency c;
  c.counts = Matrix::Zero(rows, cols);
  for (std::size_t i = 0; i < t.size(); ++i) c.counts(t[i], p[i]) += 1.0;
  c.row_sums = c.counts.rowwise().sum();
  c.col_sums = c.counts.colwise().sum().transpose();
  c.total = static_cast<double>(t.size());
  return c;
}

double Entropy(const Vector& sums, double total) {
  double h = 0.0;
  for (Index i = 0; i < sums.size(); ++i) {
    if (sums(i) > 0.0) {
      const double p = sums(i) / total;
      h -= p * std::log(p);
    }
  }
  return h;
}

double Choose2(double x) { return x * (x - 1.0) / 2.0; }

}  // namespace

std::vector<int> SolveAssignment(const Matrix& cost) {
  if (cost.rows() != cost.cols()) {
    throw DimensionError("SolveAssignment: cost matrix must be square");
  }
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  // Potentials formulation, 1-based with a sentinel column 0.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), way_cost(n + 1);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int row = 1; row <= n; ++row) {
    match[0] = row;
    int col0 = 0;
    std::fill(way_cost.begin(), way_cost.end(), inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[col0] = true;
      const int row0 = match[col0];
      double delta = inf;
      int col1 = 0;
      for (int col = 1; col <= n; ++col) {
        if (used[col]) continue;
        const double reduced = cost(row0 - 1, col - 1) - u[row0] - v[col];
        if (reduced < way_cost[col]) {
          way_cost[col] = reduced;
          way[col] = col0;
        }
        if (way_cost[col] < delta) {
          delta = way_cost[col];
          col1 = col;
        }
      }
      for (int col = 0; col <= n; ++col) {
        if (used[col]) {
          u[match[col]] += delta;
          v[col] -= delta;
        } else {
          way_cost[col] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const int col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int col = 1; col <= n; ++col) row_to_col[match[col] - 1] = col - 1;
  return row_to_col;
}

std::vector<int> MapToTruth(std::span<const int> truth,
                            std::span<const int> pred) {
  RequireSameLength(truth, pred);
  if (truth.empty()) return {};
  std::vector<int> true_values;
  std::vector<int> t = Encode(truth, &true_values);
  std::vector<int> p = Encode(pred, nullptr);
  const Contingency c = Tabulate(truth, pred);
  const Index size = std::max(c.counts.rows(), c.counts.cols());
  // Rows: predicted clusters, columns: true classes, padded with zeros.
  Matrix cost = Matrix::Zero(size, size);
  cost.topLeftCorner(c.counts.cols(), c.counts.rows()) =
      -c.counts.transpose();
  std::vector<int> assignment = SolveAssignment(cost);
  std::vector<int> mapped(pred.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const int cls = assignment[p[i]];
    mapped[i] = cls < static_cast<int>(true_values.size()) ? true_values[cls] : -1;
  }
  return mapped;
}

double ClusteringAccuracy(std::span<const int> truth,
                          std::span<const int> pred) {
  std::vector<int> mapped = MapToTruth(truth, pred);
  if (truth.empty()) return 1.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += mapped[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

double Nmi(std::span<const int> truth, std::span<const int> pred,
           NmiNorm norm) {
  RequireSameLength(truth, pred);
  if (truth.empty()) return 1.0;
  const Contingency c = Tabulate(truth, pred);
  const double h_true = Entropy(c.row_sums, c.total);
  const double h_pred = Entropy(c.col_sums, c.total);
  if (h_true == 0.0 && h_pred == 0.0) return 1.0;
  if (h_true == 0.0 || h_pred == 0.0) return 0.0;
  double mi = 0.0;
  for (Index i = 0; i < c.counts.rows(); ++i) {
    for (Index j = 0; j < c.counts.cols(); ++j) {
      const double nij = c.counts(i, j);
      if (nij == 0.0) continue;
      mi += nij / c.total *
            std::log(c.total * nij / (c.row_sums(i) * c.col_sums(j)));
    }
  }
  const double denom = norm == NmiNorm::kGeometric
                           ? std::sqrt(h_true * h_pred)
                           : 0.5 * (h_true + h_pred);
  return std::clamp(mi / denom, 0.0, 1.0);
}

double Ari(std::span<const int> truth, std::span<const int> pred) {
  RequireSameLength(truth, pred);
  const Contingency c = Tabulate(truth, pred);
  double index = 0.0;
  for (Index i = 0; i < c.counts.rows(); ++i) {
    for (Index j = 0; j < c.counts.cols(); ++j) index += Choose2(c.counts(i, j));
  }
  double rows = 0.0;
  for (Index i = 0; i < c.row_sums.size(); ++i) rows += Choose2(c.row_sums(i));
  double cols = 0.0;
  for (Index j = 0; j < c.col_sums.size(); ++j) cols += Choose2(c.col_sums(j));
  const double pairs = Choose2(c.total);
  const double expected = pairs > 0.0 ? rows * cols / pairs : 0.0;
  const double max_index = 0.5 * (rows + cols);
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

double MacroF1(std::span<const int> truth, std::span<const int> pred_mapped) {
  RequireSameLength(truth, pred_mapped);
  std::vector<int> classes(truth.begin(), truth.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  if (classes.empty()) return 1.0;
  double total = 0.0;
  for (int cls : classes) {
    double tp = 0.0, predicted = 0.0, actual = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const bool is_true = truth[i] == cls;
      const bool is_pred = pred_mapped[i] == cls;
      tp += is_true && is_pred;
      predicted += is_pred;
      actual += is_true;
    }
    const double precision = predicted > 0.0 ? tp / predicted : 0.0;
    const double recall = actual > 0.0 ? tp / actual : 0.0;
    if (precision + recall > 0.0) {
      total += 2.0 * precision * recall / (precision + recall);
    }
  }
  return total / static_cast<double>(classes.size());
}

MetricReport Evaluate(std::span<const int> truth, std::span<const int> pred,
                      NmiNorm norm) {
  MetricReport report;
  std::vector<int> mapped = MapToTruth(truth, pred);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += mapped[i] == truth[i];
  report.acc = truth.empty() ? 1.0
                             : static_cast<double>(hits) /
                                   static_cast<double>(truth.size());
  report.nmi = Nmi(truth, pred, norm);
  report.ari = Ari(truth, pred);
  report.f1 = MacroF1(truth, mapped);
  return report;
}

}  // namespace augclust
