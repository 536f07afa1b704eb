// Copyright 2026 The insg Authors. All Rights Reserved.
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

#pragma once

// Define-by-run reverse-mode differentiation over dense 2-D f64 matrices.
//
// A Tensor is a shared handle to a graph node. Every op records a backward
// closure when at least one input requires a gradient; calling backward() on
// a 1x1 result accumulates exact gradients into every reachable leaf.
// Parameters are long-lived leaves whose `grad` persists until zero_grad().

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace insg::nn {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Shape = std::array<Eigen::Index, 2>;

struct Node;

class Tensor {
 public:
  Tensor() = default;

  static Tensor constant(Matrix value);
  static Tensor parameter(Matrix value);
  static Tensor zeros(Eigen::Index rows, Eigen::Index cols);
  static Tensor scalar(double v);

  bool defined() const { return node_ != nullptr; }
  const Matrix& value() const;
  // Mutable access for optimizers and tests; bypasses the graph.
  Matrix& mutable_value();
  // Gradient with the same shape as value(); zero if nothing accumulated.
  const Matrix& grad() const;
  void zero_grad();
  bool requires_grad() const;

  Shape shape() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  double item() const;  // 1x1 only

  // Seeds d(self)/d(self) = 1 and back-propagates. Requires a 1x1 tensor.
  void backward() const;

  // Wraps a computed value. `backward` reads the node's value and grad and
  // accumulates into its inputs; it is recorded only if an input requires a
  // gradient.
  static Tensor from_op(Matrix value, std::vector<Tensor> inputs, const char* op,
                        std::function<void(Node&)> backward);

  Node* node() const { return node_.get(); }

 private:
  explicit Tensor(std::shared_ptr<Node> n) : node_(std::move(n)) {}
  std::shared_ptr<Node> node_;
};

struct Node {
  Matrix value;
  Matrix grad;
  bool requires_grad = false;
  const char* op = "leaf";
  std::vector<Tensor> inputs;
  std::function<void(Node&)> backward;

  // Adds `g` into this node's gradient, allocating it on first use.
  void accumulate(const Matrix& g);
  template <typename Expr>
  void accumulate_expr(const Expr& g) {
    if (grad.rows() != value.rows() || grad.cols() != value.cols()) {
      grad.resize(value.rows(), value.cols());
      grad.noalias() = g;
    } else {
      grad.noalias() += g;
    }
  }
  void ensure_grad();
  bool wants_grad() const { return requires_grad; }
};

// While alive, ops on this thread record no backward closures.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

// NaN/Inf checking of every op output (off by default; on in debug builds).
void set_finite_checks(bool enabled);
bool finite_checks();

// ---- primitives -----------------------------------------------------------

Tensor matmul(const Tensor& a, const Tensor& b);
// x * w + b with b a 1 x C row, optionally followed by ReLU, as one node.
Tensor affine(const Tensor& x, const Tensor& w, const Tensor& b, bool relu);
// Same-shape add, or broadcast of a 1 x C row `b` across the rows of `a`.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
// Elementwise product of equal shapes.
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double s);
// 1 - a, elementwise.
Tensor one_minus(const Tensor& a);
// Row k of `a` multiplied by s(k, 0); `s` is R x 1 (or 1 x 1 broadcast).
Tensor scale_rows(const Tensor& a, const Tensor& s);

Tensor relu(const Tensor& a);
Tensor sigmoid(const Tensor& a);
Tensor tanh(const Tensor& a);
// Row-wise softmax; throws ContractError on zero columns.
Tensor softmax_rows(const Tensor& a);

// `a` holds `segments` consecutive blocks of equal height; returns the
// column-wise max of every block as one row.
Tensor segment_max_rows(const Tensor& a, Eigen::Index segments);

Tensor concat_cols(std::span<const Tensor> parts);
Tensor concat_rows(std::span<const Tensor> parts);
Tensor slice_cols(const Tensor& a, Eigen::Index start, Eigen::Index count);
// out.row(k) = a.row(index[k]).
Tensor gather_rows(const Tensor& a, std::span<const int> index);
// out (rows x a.cols), out.row(index[k]) += a.row(k).
Tensor scatter_add_rows(const Tensor& a, std::span<const int> index, Eigen::Index rows);

Tensor sum(const Tensor& a);
Tensor mean(const Tensor& a);

// Mean over rows of -log softmax(logits)[label].
Tensor cross_entropy(const Tensor& logits, std::span<const int> labels);
// Mean over all entries of the binary cross entropy of sigmoid(logits)
// against 0/1 targets, computed in the stable softplus form.
Tensor per_class_bce(const Tensor& logits, const Matrix& targets);
// Mean binary cross entropy of probabilities clamped to [eps, 1 - eps].
// The gradient is zero where clamping is active.
Tensor bce_probs(const Tensor& probs, const Matrix& targets, double eps);

// Piecewise-linear gate: 0 for x <= beta, alpha * x - alpha * beta in
// between, 1 for x >= 1 / alpha + beta. `alpha`, `beta` are 1 x 1.
// Gradients flow only on the linear branch.
Tensor gate(const Tensor& x, const Tensor& alpha, const Tensor& beta);
double gate_value(double x, double alpha, double beta);

}  // namespace insg::nn
