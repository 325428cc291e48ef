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

#include "augclust/autodiff.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace augclust {

const Matrix& Var::value() const { return tape_->value(id_); }

double Var::scalar() const {
  const Matrix& v = value();
  if (v.rows() != 1 || v.cols() != 1) {
    throw DimensionError("scalar(): node is " + ShapeString(v));
  }
  return v(0, 0);
}

bool Var::requires_grad() const { return tape_->requires_grad(id_); }

Var Tape::Constant(Matrix value) {
  RequireFinite(value, "constant");
  Node node;
  node.value = std::move(value);
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Tape::Leaf(Parameter* param) {
  RequireFinite(param->value, param->name.c_str());
  Node node;
  node.value = param->value;
  node.requires_grad = true;
  node.param = param;
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Tape::Record(Matrix value, std::vector<Var> inputs, BackwardFn backward) {
  RequireFinite(value, "tape op");
  Node node;
  node.value = std::move(value);
  const int self = static_cast<int>(nodes_.size());
  for (const Var& in : inputs) {
    if (in.tape() != this) {
      throw std::logic_error("Tape::Record: input from another tape");
    }
    // Inputs precede their consumers, so the tape can never hold a cycle.
    assert(in.id() < self);
    node.inputs.push_back(in.id());
    node.requires_grad = node.requires_grad || nodes_[in.id()].requires_grad;
  }
  if (node.requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var(this, self);
}

void Tape::Accumulate(const Var& v, const Matrix& contribution) {
  Node& node = nodes_[v.id()];
  if (!node.requires_grad) return;
  RequireSameShape(node.value, contribution, "Tape::Accumulate");
  if (node.has_adjoint) {
    node.adjoint += contribution;
  } else {
    node.adjoint = contribution;
    node.has_adjoint = true;
  }
}

void Tape::Backward(const Var& loss, bool retain_adjoints) {
  if (loss.tape() != this) {
    throw std::logic_error("Tape::Backward: loss from another tape");
  }
  const Matrix& out = nodes_[loss.id()].value;
  if (out.rows() != 1 || out.cols() != 1) {
    throw DimensionError("Backward: loss must be 1x1, got " +
                         ShapeString(out));
  }
  Accumulate(loss, Matrix::Ones(1, 1));
  for (int id = loss.id(); id >= 0; --id) {
    Node& node = nodes_[id];
    if (!node.has_adjoint) continue;
    RequireFinite(node.adjoint, "adjoint");
    if (node.param != nullptr) {
      node.param->grad += node.adjoint;
    } else if (node.backward) {
      node.backward(*this, node.value, node.adjoint);
      if (!retain_adjoints) {
        node.adjoint = Matrix();
        node.has_adjoint = false;
      }
    }
  }
}

Matrix Tape::Adjoint(const Var& v) const {
  const Node& node = nodes_[v.id()];
  if (node.has_adjoint) return node.adjoint;
  return Matrix::Zero(node.value.rows(), node.value.cols());
}

namespace {

Tape& SameTape(const Var& a, const Var& b) {
  if (a.tape() != b.tape()) {
    throw std::logic_error("operands recorded on different tapes");
  }
  return *a.tape();
}

}  // namespace

Var MatMul(const Var& a, const Var& b) {
  Tape& tape = SameTape(a, b);
  if (a.cols() != b.rows()) {
    throw DimensionError("MatMul: " + ShapeString(a.value()) + " * " +
                         ShapeString(b.value()));
  }
  Matrix out = a.value() * b.value();
  return tape.Record(std::move(out), {a, b},
                     [a, b](Tape& t, const Matrix&, const Matrix& g) {
                       if (a.requires_grad())
                         t.Accumulate(a, g * b.value().transpose());
                       if (b.requires_grad())
                         t.Accumulate(b, a.value().transpose() * g);
                     });
}

Var MatMulTransposed(const Var& a, const Var& b) {
  Tape& tape = SameTape(a, b);
  if (a.cols() != b.cols()) {
    throw DimensionError("MatMulTransposed: " + ShapeString(a.value()) +
                         " * (" + ShapeString(b.value()) + ")^T");
  }
  Matrix out = a.value() * b.value().transpose();
  return tape.Record(std::move(out), {a, b},
                     [a, b](Tape& t, const Matrix&, const Matrix& g) {
                       if (a.requires_grad()) t.Accumulate(a, g * b.value());
                       if (b.requires_grad())
                         t.Accumulate(b, g.transpose() * a.value());
                     });
}

Var Transpose(const Var& a) {
  Matrix out = a.value().transpose();
  return a.tape()->Record(std::move(out), {a},
                          [a](Tape& t, const Matrix&, const Matrix& g) {
                            t.Accumulate(a, g.transpose());
                          });
}

Var Add(const Var& a, const Var& b) {
  Tape& tape = SameTape(a, b);
  RequireSameShape(a.value(), b.value(), "Add");
  return tape.Record(a.value() + b.value(), {a, b},
                     [a, b](Tape& t, const Matrix&, const Matrix& g) {
                       t.Accumulate(a, g);
                       t.Accumulate(b, g);
                     });
}

Var Sub(const Var& a, const Var& b) {
  Tape& tape = SameTape(a, b);
  RequireSameShape(a.value(), b.value(), "Sub");
  return tape.Record(a.value() - b.value(), {a, b},
                     [a, b](Tape& t, const Matrix&, const Matrix& g) {
                       t.Accumulate(a, g);
                       t.Accumulate(b, -g);
                     });
}

Var Scale(const Var& a, double factor) {
  return a.tape()->Record(a.value() * factor, {a},
                          [a, factor](Tape& t, const Matrix&, const Matrix& g) {
                            t.Accumulate(a, g * factor);
                          });
}

Var Hadamard(const Var& a, const Var& b) {
  Tape& tape = SameTape(a, b);
  RequireSameShape(a.value(), b.value(), "Hadamard");
  Matrix out = a.value().cwiseProduct(b.value());
  return tape.Record(std::move(out), {a, b},
                     [a, b](Tape& t, const Matrix&, const Matrix& g) {
                       if (a.requires_grad())
                         t.Accumulate(a, g.cwiseProduct(b.value()));
                       if (b.requires_grad())
                         t.Accumulate(b, g.cwiseProduct(a.value()));
                     });
}

Var AddRowBroadcast(const Var& a, const Var& row) {
  Tape& tape = SameTape(a, row);
  if (row.rows() != 1 || row.cols() != a.cols()) {
    throw DimensionError("AddRowBroadcast: " + ShapeString(a.value()) +
                         " + " + ShapeString(row.value()));
  }
  Matrix out = a.value().rowwise() + row.value().row(0);
  return tape.Record(std::move(out), {a, row},
                     [a, row](Tape& t, const Matrix&, const Matrix& g) {
                       t.Accumulate(a, g);
                       if (row.requires_grad())
                         t.Accumulate(row, g.colwise().sum());
                     });
}

Var SelectColumn(const Var& a, Index j) {
  if (j < 0 || j >= a.cols()) {
    throw DimensionError("SelectColumn: column " + std::to_string(j) +
                         " of " + ShapeString(a.value()));
  }
  Matrix out = a.value().col(j);
  return a.tape()->Record(std::move(out), {a},
                          [a, j](Tape& t, const Matrix&, const Matrix& g) {
                            Matrix dx = Matrix::Zero(a.rows(), a.cols());
                            dx.col(j) = g.col(0);
                            t.Accumulate(a, dx);
                          });
}

Var OuterSum(const Var& u, const Var& v) {
  Tape& tape = SameTape(u, v);
  if (u.cols() != 1 || v.cols() != 1) {
    throw DimensionError("OuterSum: expects column vectors, got " +
                         ShapeString(u.value()) + " and " +
                         ShapeString(v.value()));
  }
  Matrix out(u.rows(), v.rows());
  out.colwise() = u.value().col(0);
  out.rowwise() += v.value().col(0).transpose();
  return tape.Record(std::move(out), {u, v},
                     [u, v](Tape& t, const Matrix&, const Matrix& g) {
                       if (u.requires_grad())
                         t.Accumulate(u, g.rowwise().sum());
                       if (v.requires_grad())
                         t.Accumulate(v, g.colwise().sum().transpose());
                     });
}

Var Activate(const Var& a, Activation kind) {
  const Matrix& x = a.value();
  Matrix out;
  switch (kind) {
    case Activation::kRelu:
      out = x.cwiseMax(0.0);
      break;
    case Activation::kLeakyRelu:
      out = x.unaryExpr([](double v) { return v > 0.0 ? v : kLeakySlope * v; });
      break;
    case Activation::kTanh:
      out = x.array().tanh().matrix();
      break;
  }
  return a.tape()->Record(
      std::move(out), {a},
      [a, kind](Tape& t, const Matrix& y, const Matrix& g) {
        const Matrix& x = a.value();
        Matrix dx;
        switch (kind) {
          case Activation::kRelu:
            dx = g.binaryExpr(x, [](double gv, double xv) {
              return xv > 0.0 ? gv : 0.0;
            });
            break;
          case Activation::kLeakyRelu:
            dx = g.binaryExpr(x, [](double gv, double xv) {
              return xv > 0.0 ? gv : kLeakySlope * gv;
            });
            break;
          case Activation::kTanh:
            dx = g.cwiseProduct((1.0 - y.array().square()).matrix());
            break;
        }
        t.Accumulate(a, dx);
      });
}

Var Clamp(const Var& a, double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("Clamp: lo > hi");
  Matrix out = a.value().cwiseMax(lo).cwiseMin(hi);
  return a.tape()->Record(
      std::move(out), {a},
      [a, lo, hi](Tape& t, const Matrix&, const Matrix& g) {
        t.Accumulate(a, g.binaryExpr(a.value(), [lo, hi](double gv, double xv) {
          return (xv > lo && xv < hi) ? gv : 0.0;
        }));
      });
}

namespace {

Matrix SoftmaxBackward(const Matrix& y, const Matrix& g, double scale) {
  Vector dots = g.cwiseProduct(y).rowwise().sum();
  Matrix centered = g.colwise() - dots;
  return scale * y.cwiseProduct(centered);
}

}  // namespace

Var RowSoftmax(const Var& a, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("RowSoftmax: scale <= 0");
  const Matrix& x = a.value();
  Matrix out(x.rows(), x.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    const double peak = x.row(i).maxCoeff();
    out.row(i) = ((x.row(i).array() - peak) * scale).exp().matrix();
    out.row(i) /= out.row(i).sum();
  }
  return a.tape()->Record(std::move(out), {a},
                          [a, scale](Tape& t, const Matrix& y, const Matrix& g) {
                            t.Accumulate(a, SoftmaxBackward(y, g, scale));
                          });
}

Var MaskedRowSoftmax(const Var& a, const Matrix& mask, double scale) {
  if (!(scale > 0.0)) {
    throw std::invalid_argument("MaskedRowSoftmax: scale <= 0");
  }
  const Matrix& x = a.value();
  RequireSameShape(x, mask, "MaskedRowSoftmax");
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    double peak = -std::numeric_limits<double>::infinity();
    for (Index j = 0; j < x.cols(); ++j) {
      if (mask(i, j) != 0.0) peak = std::max(peak, x(i, j));
    }
    if (!std::isfinite(peak)) continue;  // empty neighborhood
    double total = 0.0;
    for (Index j = 0; j < x.cols(); ++j) {
      if (mask(i, j) != 0.0) {
        out(i, j) = std::exp((x(i, j) - peak) * scale);
        total += out(i, j);
      }
    }
    out.row(i) /= total;
  }
  return a.tape()->Record(std::move(out), {a},
                          [a, scale](Tape& t, const Matrix& y, const Matrix& g) {
                            t.Accumulate(a, SoftmaxBackward(y, g, scale));
                          });
}

Var RowL2Normalize(const Var& a) {
  const Matrix& x = a.value();
  Vector norms = x.rowwise().norm();
  Matrix out = x;
  for (Index i = 0; i < x.rows(); ++i) {
    if (norms(i) > 0.0) out.row(i) /= norms(i);
  }
  return a.tape()->Record(
      std::move(out), {a},
      [a, norms](Tape& t, const Matrix& y, const Matrix& g) {
        Matrix dx = Matrix::Zero(y.rows(), y.cols());
        for (Index i = 0; i < y.rows(); ++i) {
          if (norms(i) == 0.0) continue;
          const double along = y.row(i).dot(g.row(i));
          dx.row(i) = (g.row(i) - along * y.row(i)) / norms(i);
        }
        t.Accumulate(a, dx);
      });
}

Var CosineSimilarity(const Var& a, const Var& b) {
  if (a.cols() != b.cols()) {
    throw DimensionError("CosineSimilarity: " + ShapeString(a.value()) +
                         " vs " + ShapeString(b.value()));
  }
  if (a.id() == b.id()) {
    Var unit = RowL2Normalize(a);
    return MatMulTransposed(unit, unit);
  }
  return MatMulTransposed(RowL2Normalize(a), RowL2Normalize(b));
}

Var SymNormalizeWithSelfLoops(const Var& s) {
  const Matrix& x = s.value();
  if (x.rows() != x.cols()) {
    throw DimensionError("SymNormalizeWithSelfLoops: not square " +
                         ShapeString(x));
  }
  Vector degree = x.rowwise().sum().array() + 1.0;
  if ((degree.array() <= 0.0).any()) {
    throw NumericError("SymNormalizeWithSelfLoops: non-positive degree");
  }
  Vector inv_sqrt = degree.array().rsqrt();
  Matrix out = x;
  out.diagonal().array() += 1.0;
  out = inv_sqrt.asDiagonal() * out * inv_sqrt.asDiagonal();
  return s.tape()->Record(
      std::move(out), {s},
      [s, inv_sqrt](Tape& t, const Matrix& y, const Matrix& g) {
        // y_ij = r_i (s + I)_ij r_j with r = degree^-1/2.
        Matrix dx = inv_sqrt.asDiagonal() * g * inv_sqrt.asDiagonal();
        Matrix h = g.cwiseProduct(y);
        Vector through_r = h.rowwise().sum() + h.colwise().sum().transpose();
        Vector d_degree =
            -0.5 * inv_sqrt.array().square() * through_r.array();
        dx.colwise() += d_degree;
        t.Accumulate(s, dx);
      });
}

Var Sum(const Var& a) {
  Matrix out(1, 1);
  out(0, 0) = a.value().sum();
  return a.tape()->Record(std::move(out), {a},
                          [a](Tape& t, const Matrix&, const Matrix& g) {
                            t.Accumulate(a, Matrix::Constant(a.rows(), a.cols(),
                                                             g(0, 0)));
                          });
}

Var SquaredNorm(const Var& a) {
  Matrix out(1, 1);
  out(0, 0) = a.value().squaredNorm();
  return a.tape()->Record(std::move(out), {a},
                          [a](Tape& t, const Matrix&, const Matrix& g) {
                            t.Accumulate(a, 2.0 * g(0, 0) * a.value());
                          });
}

}  // namespace augclust
