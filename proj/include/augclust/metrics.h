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

// External clustering quality measures against ground-truth labels.
//
// Label values are arbitrary integers; only the partition they induce
// matters. Every function throws std::invalid_argument on length mismatch.

#ifndef AUGCLUST_METRICS_H_
#define AUGCLUST_METRICS_H_

#include <span>
#include <vector>

#include "augclust/matrix.h"

namespace augclust {

struct MetricReport {
  double acc = 0.0;
  double nmi = 0.0;
  double ari = 0.0;
  double f1 = 0.0;
};

enum class NmiNorm { kGeometric, kArithmetic };

// Minimum-cost perfect matching on a square cost matrix (Hungarian method).
// Returns row_to_col.
std::vector<int> SolveAssignment(const Matrix& cost);

// Relabels `pred` with the true label it is matched to under the
// contingency-maximizing one-to-one mapping. Predicted clusters left
// unmatched (more clusters than classes) map to -1.
std::vector<int> MapToTruth(std::span<const int> truth,
                            std::span<const int> pred);

double ClusteringAccuracy(std::span<const int> truth, std::span<const int> pred);

// Natural-log mutual information over sqrt(H(t) H(p)) or (H(t) + H(p)) / 2.
// Two single-cluster partitions score 1; one constant against a
// non-constant partition scores 0.
double Nmi(std::span<const int> truth, std::span<const int> pred,
           NmiNorm norm = NmiNorm::kGeometric);

// Adjusted Rand index. Returns 1 when the index is undefined (max equals
// expected, e.g. both partitions trivial).
double Ari(std::span<const int> truth, std::span<const int> pred);

// Unweighted mean of per-class F1 over the classes present in `truth`.
// `pred_mapped` must already be expressed in true-label space.
double MacroF1(std::span<const int> truth, std::span<const int> pred_mapped);

MetricReport Evaluate(std::span<const int> truth, std::span<const int> pred,
                      NmiNorm norm = NmiNorm::kGeometric);

}  // namespace augclust

#endif  // AUGCLUST_METRICS_H_
