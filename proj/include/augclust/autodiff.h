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

// Dense reverse-mode differentiation over row-major double matrices.
//
// A Tape records every operation of one forward pass. Values are stored on
// the tape; Var is a light handle (tape pointer + node index). Calling
// Backward() on a 1x1 node walks the tape in reverse insertion order, which
// is a valid reverse topological order because a node can only consume
// nodes recorded before it.

#ifndef AUGCLUST_AUTODIFF_H_
#define AUGCLUST_AUTODIFF_H_

#include <functional>
#include <string>
#include <vector>

#include "augclust/matrix.h"

namespace augclust {

// A trainable tensor. `grad` accumulates across Backward() calls until
// ZeroGrad() is called.
struct Parameter {
  Parameter() = default;
  Parameter(std::string name, Matrix value)
      : name(std::move(name)),
        value(std::move(value)),
        grad(Matrix::Zero(this->value.rows(), this->value.cols())) {}

  void ZeroGrad() { grad.setZero(value.rows(), value.cols()); }

  std::string name;
  Matrix value;
  Matrix grad;
};

class Tape;

class Var {
 public:
  Var() = default;
  Var(Tape* tape, int id) : tape_(tape), id_(id) {}

  const Matrix& value() const;
  Index rows() const { return value().rows(); }
  Index cols() const { return value().cols(); }
  // Scalar value of a 1x1 node.
  double scalar() const;
  bool requires_grad() const;

  Tape* tape() const { return tape_; }
  int id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  Tape* tape_ = nullptr;
  int id_ = -1;
};

class Tape {
 public:
  // Called with the node's forward value and the adjoint of that value.
  using BackwardFn =
      std::function<void(Tape&, const Matrix& out, const Matrix& adjoint)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // A value that never receives gradient.
  Var Constant(Matrix value);
  // A leaf bound to `param`; Backward() adds into param->grad.
  Var Leaf(Parameter* param);
  // Records an operation. `backward` is dropped when no input requires
  // gradient. Inputs must already be on this tape.
  Var Record(Matrix value, std::vector<Var> inputs, BackwardFn backward);

  // Reverse sweep from a scalar node. Adjoints of parameters are added to
  // their Parameter::grad. Intermediate adjoints are released as the sweep
  // passes them unless `retain_adjoints` is set.
  void Backward(const Var& loss, bool retain_adjoints = false);

  // Adds `contribution` to the adjoint of `v`; no-op for constants.
  void Accumulate(const Var& v, const Matrix& contribution);

  const Matrix& value(int id) const { return nodes_[id].value; }
  bool requires_grad(int id) const { return nodes_[id].requires_grad; }
  // Adjoint after Backward(); zero matrix when the node got no gradient.
  Matrix Adjoint(const Var& v) const;
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix adjoint;
    bool has_adjoint = false;
    bool requires_grad = false;
    std::vector<int> inputs;
    BackwardFn backward;
    Parameter* param = nullptr;
  };

  std::vector<Node> nodes_;
};

enum class Activation { kRelu, kLeakyRelu, kTanh };

constexpr double kLeakySlope = 0.2;

// Differentiable operations. All of them throw DimensionError on shape
// mismatch and NumericError if the result contains NaN or Inf.
Var MatMul(const Var& a, const Var& b);
// a * b^T without materializing the transpose on the tape.
Var MatMulTransposed(const Var& a, const Var& b);
Var Transpose(const Var& a);
Var Add(const Var& a, const Var& b);
Var Sub(const Var& a, const Var& b);
Var Scale(const Var& a, double factor);
Var Hadamard(const Var& a, const Var& b);
// a (n x m) plus a 1 x m row added to every row.
Var AddRowBroadcast(const Var& a, const Var& row);
// Column j of a as an n x 1 matrix.
Var SelectColumn(const Var& a, Index j);
// out(i, j) = u(i) + v(j) for column vectors u (n x 1) and v (m x 1).
Var OuterSum(const Var& u, const Var& v);
Var Activate(const Var& a, Activation kind);
// Entrywise clamp; gradient passes only strictly inside (lo, hi).
Var Clamp(const Var& a, double lo, double hi);
// Softmax of scale * a along each row, max-shifted.
Var RowSoftmax(const Var& a, double scale = 1.0);
// Softmax restricted to entries where mask != 0; other entries are 0.
Var MaskedRowSoftmax(const Var& a, const Matrix& mask, double scale = 1.0);
// Zero rows pass through with zero gradient.
Var RowL2Normalize(const Var& a);
// Cosine of every row of a against every row of b; zero rows give 0.
Var CosineSimilarity(const Var& a, const Var& b);
// D^-1/2 (s + I) D^-1/2 with D the row sums of s + I. Requires those row
// sums to be positive.
Var SymNormalizeWithSelfLoops(const Var& s);
Var Sum(const Var& a);
// Sum of squared entries (squared Frobenius norm).
Var SquaredNorm(const Var& a);

}  // namespace augclust

#endif  // AUGCLUST_AUTODIFF_H_
