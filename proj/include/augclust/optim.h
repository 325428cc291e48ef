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

#ifndef AUGCLUST_OPTIM_H_
#define AUGCLUST_OPTIM_H_

#include <span>
#include <vector>

#include "augclust/autodiff.h"

namespace augclust {

struct AdamOptions {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with bias correction. Moments are keyed by position in the parameter
// list, so the same list must be passed to every Step().
class Adam {
 public:
  explicit Adam(AdamOptions options);

  // Updates every parameter from its `grad`. Throws DimensionError if the
  // parameter list changes shape between calls.
  void Step(std::span<Parameter* const> params);

  int steps() const { return step_; }
  const std::vector<Matrix>& first_moments() const { return m_; }
  const std::vector<Matrix>& second_moments() const { return v_; }

 private:
  AdamOptions options_;
  int step_ = 0;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
};

// Global l2 norm over all gradients.
double GradientNorm(std::span<Parameter* const> params);

// Rescales all gradients so their global norm is at most `max_norm`.
// Returns the norm before clipping. max_norm <= 0 disables clipping.
double ClipGradientNorm(std::span<Parameter* const> params, double max_norm);

}  // namespace augclust

#endif  // AUGCLUST_OPTIM_H_
