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

#ifndef AUGCLUST_SYNTH_H_
#define AUGCLUST_SYNTH_H_

#include <cstdint>

#include "augclust/graph.h"

namespace augclust {

// Stochastic block model with Gaussian-blob attributes.
struct SbmOptions {
  int n_per_block = 50;
  int blocks = 2;
  double p_in = 0.2;
  double p_out = 0.01;
  // Euclidean distance between any two block means.
  double attr_sep = 5.0;
  int dim = 32;
  std::uint64_t seed = 1;
};

// Nodes are laid out block by block; node i belongs to block i / n_per_block.
// Every pair i < j is an edge independently with p_in (same block) or p_out.
// Attributes are N(mean_b, I) with mean_b = attr_sep / sqrt(2) * e_b.
// Throws ConfigError on invalid options.
Graph GenerateSbm(const SbmOptions& options);

}  // namespace augclust

#endif  // AUGCLUST_SYNTH_H_
