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

#include "augclust/kmeans.h"

#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace augclust {
namespace {

Matrix SeedPlusPlus(const Matrix& points, int k, std::mt19937_64& rng) {
  const Index n = points.rows();
  Matrix centroids(k, points.cols());
  std::vector<bool> chosen(n, false);
  std::uniform_int_distribution<Index> first(0, n - 1);
  Index pick = first(rng);
  centroids.row(0) = points.row(pick);
  chosen[pick] = true;

  Vector best = (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int c = 1; c < k; ++c) {
    const double total = best.sum();
    if (total > 0.0) {
      const double target = unit(rng) * total;
      double running = 0.0;
      pick = -1;
      for (Index i = 0; i < n; ++i) {
        if (best(i) <= 0.0) continue;
        running += best(i);
        pick = i;
        if (running >= target) break;
      }
    } else {
      // Every point coincides with a centroid; take the first unused one.
      pick = 0;
      while (chosen[pick]) ++pick;
    }
    chosen[pick] = true;
    centroids.row(c) = points.row(pick);
    Vector dist = (points.rowwise() - centroids.row(c)).rowwise().squaredNorm();
    best = best.cwiseMin(dist);
  }
  return centroids;
}

double Assign(const Matrix& points, const Matrix& centroids,
              std::vector<int>& assignments, Vector& distances) {
  double inertia = 0.0;
  for (Index i = 0; i < points.rows(); ++i) {
    auto [label, dist] = NearestCentroid(centroids, points.row(i));
    assignments[i] = label;
    distances(i) = dist;
    inertia += dist;
  }
  return inertia;
}

ClusterResult RunOnce(const Matrix& points, int k, std::mt19937_64& rng,
                      const KMeansOptions& options) {
  const Index n = points.rows();
  ClusterResult result;
  result.centroids = SeedPlusPlus(points, k, rng);
  result.assignments.assign(n, 0);
  Vector distances(n);

  for (int iter = 0; iter < options.max_iter; ++iter) {
    result.inertia_trace.push_back(
        Assign(points, result.centroids, result.assignments, distances));
    result.iterations = iter + 1;

    Matrix sums = Matrix::Zero(k, points.cols());
    std::vector<int> counts(k, 0);
    for (Index i = 0; i < n; ++i) {
      sums.row(result.assignments[i]) += points.row(i);
      ++counts[result.assignments[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      // Reseed from the point farthest from its centroid, taken out of a
      // cluster that can spare it.
      Index far = -1;
      for (Index i = 0; i < n; ++i) {
        if (counts[result.assignments[i]] <= 1) continue;
        if (far < 0 || distances(i) > distances(far)) far = i;
      }
      if (far < 0) throw std::logic_error("KMeans: cannot repair empty cluster");
      const int from = result.assignments[far];
      sums.row(from) -= points.row(far);
      --counts[from];
      sums.row(c) = points.row(far);
      counts[c] = 1;
      result.assignments[far] = c;
      distances(far) = 0.0;
    }
    Matrix updated(k, points.cols());
    for (int c = 0; c < k; ++c) updated.row(c) = sums.row(c) / counts[c];
    const double shift =
        (updated - result.centroids).rowwise().norm().maxCoeff();
    result.centroids = std::move(updated);
    if (shift < options.tol) break;
  }
  result.inertia =
      Assign(points, result.centroids, result.assignments, distances);
  // Coincident centroids can leave one without members after the final
  // assignment; move the farthest point onto it.
  for (int attempt = 0; attempt < k; ++attempt) {
    std::vector<int> counts(k, 0);
    for (int label : result.assignments) ++counts[label];
    int empty = -1;
    for (int c = 0; c < k && empty < 0; ++c) {
      if (counts[c] == 0) empty = c;
    }
    if (empty < 0) break;
    Index far = -1;
    for (Index i = 0; i < n; ++i) {
      if (counts[result.assignments[i]] <= 1) continue;
      if (far < 0 || distances(i) > distances(far)) far = i;
    }
    result.centroids.row(empty) = points.row(far);
    result.inertia =
        Assign(points, result.centroids, result.assignments, distances);
  }
  result.inertia_trace.push_back(result.inertia);
  return result;
}

}  // namespace

std::pair<int, double> NearestCentroid(
    const Matrix& centroids, const Eigen::Ref<const Eigen::RowVectorXd>& point) {
  int best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (Index c = 0; c < centroids.rows(); ++c) {
    const double dist = (centroids.row(c) - point).squaredNorm();
    if (dist < best_dist) {
      best_dist = dist;
      best = static_cast<int>(c);
    }
  }
  return {best, best_dist};
}

ClusterResult KMeans(const Matrix& points, int k, std::uint64_t seed,
                     const KMeansOptions& options) {
  if (k < 2 || k > points.rows()) {
    throw std::invalid_argument("KMeans: k=" + std::to_string(k) +
                                " outside [2, " +
                                std::to_string(points.rows()) + "]");
  }
  RequireFinite(points, "KMeans input");
  std::mt19937_64 rng(seed);
  ClusterResult best;
  for (int start = 0; start < std::max(1, options.restarts); ++start) {
    ClusterResult candidate = RunOnce(points, k, rng, options);
    if (start == 0 || candidate.inertia < best.inertia) {
      best = std::move(candidate);
    }
  }
  return best;
}

}  // namespace augclust
