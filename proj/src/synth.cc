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

#include "augclust/synth.h"

#include <cmath>
#include <random>

namespace augclust {

Graph GenerateSbm(const SbmOptions& options) {
  auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!in_unit(options.p_in) || !in_unit(options.p_out)) {
    throw ConfigError("synth: probabilities must lie in [0, 1]");
  }
  if (options.blocks < 1 || options.n_per_block < 1) {
    throw ConfigError("synth: blocks and n_per_block must be positive");
  }
  if (options.dim < options.blocks) {
    throw ConfigError("synth: dim must be at least the number of blocks");
  }
  if (!(options.attr_sep >= 0.0)) {
    throw ConfigError("synth: attr_sep must be non-negative");
  }

  const int n = options.n_per_block * options.blocks;
  std::mt19937_64 rng(options.seed);
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = i / options.n_per_block;

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double p = labels[i] == labels[j] ? options.p_in : options.p_out;
      if (coin(rng) < p) edges.emplace_back(i, j);
    }
  }

  std::normal_distribution<double> noise(0.0, 1.0);
  const double offset = options.attr_sep / std::sqrt(2.0);
  Matrix features(n, options.dim);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < options.dim; ++j) {
      features(i, j) = noise(rng) + (j == labels[i] ? offset : 0.0);
    }
  }
  return MakeGraph(std::move(features), edges, std::move(labels),
                   options.blocks);
}

}  // namespace augclust
