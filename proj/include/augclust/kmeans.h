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

#ifndef AUGCLUST_KMEANS_H_
#define AUGCLUST_KMEANS_H_

#include <cstdint>
#include <vector>

#include "augclust/matrix.h"

namespace augclust {

struct KMeansOptions {
  int max_iter = 300;
  // Stop once no centroid moves farther than this (Euclidean).
  double tol = 1e-6;
  // Independent k-means++ starts; the lowest-inertia result is kept.
  int restarts = 1;
};

struct ClusterResult {
  std::vector<int> assignments;
  Matrix centroids;  // k x d
  double inertia = 0.0;
  // Inertia after every assignment step of the winning start, final last.
  std::vector<double> inertia_trace;
  int iterations = 0;
};

// k-means++ seeding followed by Lloyd iterations. Ties go to the lower
// centroid index. A cluster that empties is reseeded with the point farthest
// from its current centroid. Requires 2 <= k <= N and finite input.
ClusterResult KMeans(const Matrix& points, int k, std::uint64_t seed,
                     const KMeansOptions& options = {});

// Index of the nearest row of `centroids` (lower index on ties) and the
// squared distance to it.
std::pair<int, double> NearestCentroid(const Matrix& centroids,
                                       const Eigen::Ref<const Eigen::RowVectorXd>& point);

}  // namespace augclust

#endif  // AUGCLUST_KMEANS_H_
