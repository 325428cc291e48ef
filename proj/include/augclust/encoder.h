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

#ifndef AUGCLUST_ENCODER_H_
#define AUGCLUST_ENCODER_H_

#include <random>
#include <vector>

#include "augclust/autodiff.h"

namespace augclust {

// Shared (siamese) view encoder: renormalize the structure, smooth the
// attributes with the graph filter, project linearly, l2-normalize rows.
class Encoder {
 public:
  Encoder(Index input_dim, Index embedding_dim, int filter_depth,
          std::mt19937_64& rng);

  // `structure` is an N x N nonnegative (weighted) adjacency without
  // self-loops added; `attributes` is N x D. Projection happens before the
  // filter, which is the same map and cheaper when D > d.
  Var Encode(Tape& tape, const Var& structure, const Var& attributes);

  // Attributes already smoothed by Filter(); only projection and
  // normalization are recorded on the tape.
  Var EncodeFiltered(Tape& tape, const Matrix& filtered);

  // a_hat(structure)^depth * attributes for views that never change.
  Matrix Filter(const Matrix& structure, const Matrix& attributes) const;

  int filter_depth() const { return filter_depth_; }
  Index embedding_dim() const { return params_[0].value.cols(); }
  std::vector<Parameter*> parameters() { return {&params_[0]}; }

 private:
  std::vector<Parameter> params_;
  int filter_depth_;
};

// Entrywise mean of the two view embeddings.
Var Fuse(const Var& first, const Var& second);
Matrix Fuse(const Matrix& first, const Matrix& second);

}  // namespace augclust

#endif  // AUGCLUST_ENCODER_H_
