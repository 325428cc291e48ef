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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "augclust/kmeans.h"

namespace augclust {

int PseudoLabels::masked_count() const {
  return static_cast<int>(std::count(mask.begin(), mask.end(), true));
}

Var CrossViewSimilarity(const Var& first, const Var& second) {
  if (first.rows() != second.rows() || first.cols() != second.cols()) {
    throw DimensionError("CrossViewSimilarity: " +
                         ShapeString(first.value()) + " vs " +
                         ShapeString(second.value()));
  }
  return MatMulTransposed(first, second);
}

Matrix CrossViewSimilarity(const Matrix& first, const Matrix& second) {
  RequireSameShape(first, second, "CrossViewSimilarity");
  return first * second.transpose();
}

PseudoLabels ConfidenceSelect(const Matrix& fused, const Matrix& centroids,
                              double tau, ConfidenceRule rule) {
  if (centroids.rows() < 2) {
    throw std::invalid_argument("ConfidenceSelect: need at least 2 centroids");
  }
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw std::invalid_argument("ConfidenceSelect: tau must lie in (0, 1]");
  }
  if (fused.cols() != centroids.cols()) {
    throw DimensionError("ConfidenceSelect: embeddings " + ShapeString(fused) +
                         " vs centroids " + ShapeString(centroids));
  }
  const Index n = fused.rows();
  PseudoLabels out;
  out.labels.resize(n);
  out.confidence.resize(n);
  out.mask.assign(n, false);
  for (Index i = 0; i < n; ++i) {
    Eigen::RowVectorXd dist =
        (centroids.rowwise() - fused.row(i)).rowwise().squaredNorm().transpose();
    const int label = NearestCentroid(centroids, fused.row(i)).first;
    // softmax(-dist) at the label, shifted by the smallest distance.
    const double nearest = dist(label);
    const double total = (-(dist.array() - nearest)).exp().sum();
    out.labels[i] = label;
    out.confidence[i] = 1.0 / total;
  }
  if (rule == ConfidenceRule::kAbsolute) {
    for (Index i = 0; i < n; ++i) out.mask[i] = out.confidence[i] >= tau;
    return out;
  }
  const auto keep = static_cast<Index>(
      std::ceil(tau * static_cast<double>(n) - 1e-9));
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return out.confidence[a] > out.confidence[b];
  });
  for (Index r = 0; r < std::min(keep, n); ++r) out.mask[order[r]] = true;
  return out;
}

Matrix PseudoLabelMatrix(const std::vector<int>& labels,
                         const std::vector<bool>& mask) {
  if (labels.size() != mask.size()) {
    throw DimensionError("PseudoLabelMatrix: labels and mask differ in length");
  }
  const Index n = static_cast<Index>(labels.size());
  Matrix z = Matrix::Ones(n, n);
  for (Index i = 0; i < n; ++i) {
    if (!mask[i]) continue;
    for (Index j = 0; j < n; ++j) {
      if (mask[j] && labels[i] != labels[j]) z(i, j) = 0.0;
    }
  }
  return z;
}

Var Refine(const Var& aug_s, const Var& similarity, const Matrix& agreement) {
  RequireSameShape(aug_s.value(), agreement, "Refine");
  Var scaled = Hadamard(aug_s, Clamp(similarity, 0.0, 1.0));
  return Hadamard(scaled, aug_s.tape()->Constant(agreement));
}

Matrix Refine(const Matrix& aug_s, const Matrix& similarity,
              const Matrix& agreement) {
  RequireSameShape(aug_s, similarity, "Refine");
  RequireSameShape(aug_s, agreement, "Refine");
  return aug_s.cwiseProduct(similarity.cwiseMax(0.0).cwiseMin(1.0))
      .cwiseProduct(agreement);
}

}  // namespace augclust
