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

// Dual refinement of the learned structure: the cross-view similarity S and
// the high-confidence pseudo-label agreement Z both mask Aug_S entrywise.

#ifndef AUGCLUST_REFINE_H_
#define AUGCLUST_REFINE_H_

#include <vector>

#include "augclust/autodiff.h"

namespace augclust {

enum class ConfidenceRule {
  // Keep the ceil(tau * N) most confident nodes.
  kFraction,
  // Keep nodes whose confidence is at least tau.
  kAbsolute,
};

struct PseudoLabels {
  std::vector<int> labels;
  std::vector<double> confidence;
  std::vector<bool> mask;

  int masked_count() const;
};

// S = F1 F2^T; rows of both inputs are expected to be unit vectors.
Var CrossViewSimilarity(const Var& first, const Var& second);
Matrix CrossViewSimilarity(const Matrix& first, const Matrix& second);

// Label = nearest centroid (lower index on ties). Confidence = softmax of
// negative squared distances to all centroids, read at the label. Requires
// at least two centroids and 0 < tau <= 1.
PseudoLabels ConfidenceSelect(const Matrix& fused, const Matrix& centroids,
                              double tau, ConfidenceRule rule);

// Z(i, j) = 1 if either node is unmasked, otherwise [p_i == p_j].
Matrix PseudoLabelMatrix(const std::vector<int>& labels,
                         const std::vector<bool>& mask);

// aug_s * clamp(S, 0, 1) * Z, entrywise. Z is a constant mask.
Var Refine(const Var& aug_s, const Var& similarity, const Matrix& agreement);
Matrix Refine(const Matrix& aug_s, const Matrix& similarity,
              const Matrix& agreement);

}  // namespace augclust

#endif  // AUGCLUST_REFINE_H_
