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

#include "augclust/optim.h"

#include <cmath>
#include <stdexcept>

namespace augclust {

Adam::Adam(AdamOptions options) : options_(options) {
  if (!(options_.lr > 0.0)) throw std::invalid_argument("Adam: lr must be > 0");
}

void Adam::Step(std::span<Parameter* const> params) {
  if (m_.empty()) {
    for (const Parameter* p : params) {
      m_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
      v_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
    }
  }
  if (m_.size() != params.size()) {
    throw DimensionError("Adam::Step: parameter count changed");
  }
  ++step_;
  const double correction1 = 1.0 - std::pow(options_.beta1, step_);
  const double correction2 = 1.0 - std::pow(options_.beta2, step_);
  for (std::size_t i = 0; i < params.size(); ++i) {
    Parameter& p = *params[i];
    RequireSameShape(p.value, p.grad, "Adam::Step grad");
    RequireSameShape(p.value, m_[i], "Adam::Step state");
    m_[i] = options_.beta1 * m_[i] + (1.0 - options_.beta1) * p.grad;
    v_[i] = options_.beta2 * v_[i] +
            (1.0 - options_.beta2) * p.grad.cwiseAbs2();
    Matrix m_hat = m_[i] / correction1;
    Matrix v_hat = v_[i] / correction2;
    p.value.array() -=
        options_.lr * m_hat.array() / (v_hat.array().sqrt() + options_.epsilon);
    RequireFinite(p.value, p.name.c_str());
  }
}

double GradientNorm(std::span<Parameter* const> params) {
  double total = 0.0;
  for (const Parameter* p : params) total += p->grad.squaredNorm();
  return std::sqrt(total);
}

double ClipGradientNorm(std::span<Parameter* const> params, double max_norm) {
  const double norm = GradientNorm(params);
  if (max_norm > 0.0 && norm > max_norm) {
    const double factor = max_norm / norm;
    for (Parameter* p : params) p->grad *= factor;
  }
  return norm;
}

}  // namespace augclust
