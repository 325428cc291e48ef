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

#include "augclust/encoder.h"

#include <stdexcept>

#include "augclust/augment.h"
#include "augclust/graph.h"

namespace augclust {

Encoder::Encoder(Index input_dim, Index embedding_dim, int filter_depth,
                 std::mt19937_64& rng)
    : filter_depth_(filter_depth) {
  if (filter_depth < 0) throw std::invalid_argument("negative filter depth");
  params_.emplace_back("encoder.w",
                       GlorotUniform(input_dim, embedding_dim, rng));
}

Var Encoder::Encode(Tape& tape, const Var& structure, const Var& attributes) {
  if (structure.rows() != structure.cols() ||
      structure.rows() != attributes.rows()) {
    throw DimensionError("Encode: structure " + ShapeString(structure.value()) +
                         " with attributes " + ShapeString(attributes.value()));
  }
  Var smoothed = MatMul(attributes, tape.Leaf(&params_[0]));
  if (filter_depth_ > 0) {
    Var filter = SymNormalizeWithSelfLoops(structure);
    for (int step = 0; step < filter_depth_; ++step) {
      smoothed = MatMul(filter, smoothed);
    }
  }
  return RowL2Normalize(smoothed);
}

Var Encoder::EncodeFiltered(Tape& tape, const Matrix& filtered) {
  Var projected = MatMul(tape.Constant(filtered), tape.Leaf(&params_[0]));
  return RowL2Normalize(projected);
}

Matrix Encoder::Filter(const Matrix& structure,
                       const Matrix& attributes) const {
  return GraphFilter(Normalize(structure), attributes, filter_depth_);
}

Var Fuse(const Var& first, const Var& second) {
  return Scale(Add(first, second), 0.5);
}

Matrix Fuse(const Matrix& first, const Matrix& second) {
  RequireSameShape(first, second, "Fuse");
  return 0.5 * (first + second);
}

}  // namespace augclust
