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

#include "insg/tensor.hpp"

#include <atomic>
#ifdef __GLIBC__
#include <malloc.h>
#endif
#include <cmath>
#include <string>
#include <unordered_set>

#include "insg/errors.hpp"

namespace insg::nn {

namespace {

#ifdef NDEBUG
std::atomic<bool> g_finite_checks{false};
#else
std::atomic<bool> g_finite_checks{true};
#endif

[[noreturn]] void shape_error(const char* op, const Tensor& a, const Tensor& b) {
  throw ContractError(std::string(op) + ": shape mismatch (" + std::to_string(a.rows()) + "x" +
                      std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                      std::to_string(b.cols()) + ")");
}

thread_local bool t_grad_enabled = true;

#ifdef __GLIBC__
// Large intermediate matrices are allocated and freed on every op. Keeping
// them on the heap instead of mmap-ing each one avoids a page-fault storm.
const bool g_allocator_tuned = [] {
  mallopt(M_MMAP_THRESHOLD, 1 << 30);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
  mallopt(M_TOP_PAD, 64 << 20);
  return true;
}();
#endif

Node& in(Node& self, std::size_t k) { return *self.inputs[k].node(); }

}  // namespace

NoGradGuard::NoGradGuard() : previous_(t_grad_enabled) { t_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { t_grad_enabled = previous_; }

void set_finite_checks(bool enabled) { g_finite_checks = enabled; }
bool finite_checks() { return g_finite_checks; }

void Node::ensure_grad() {
  if (grad.rows() != value.rows() || grad.cols() != value.cols()) {
    grad = Matrix::Zero(value.rows(), value.cols());
  }
}

void Node::accumulate(const Matrix& g) {
  if (grad.rows() != value.rows() || grad.cols() != value.cols()) {
    grad = g;
  } else {
    grad += g;
  }
}

Tensor Tensor::constant(Matrix value) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  return Tensor(std::move(n));
}

Tensor Tensor::parameter(Matrix value) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  n->requires_grad = true;
  n->grad = Matrix::Zero(n->value.rows(), n->value.cols());
  return Tensor(std::move(n));
}

Tensor Tensor::zeros(Eigen::Index rows, Eigen::Index cols) {
  return constant(Matrix::Zero(rows, cols));
}

Tensor Tensor::scalar(double v) { return constant(Matrix::Constant(1, 1, v)); }

const Matrix& Tensor::value() const { return node_->value; }
Matrix& Tensor::mutable_value() { return node_->value; }

const Matrix& Tensor::grad() const {
  node_->ensure_grad();
  return node_->grad;
}

void Tensor::zero_grad() {
  node_->grad.setZero(node_->value.rows(), node_->value.cols());
}

bool Tensor::requires_grad() const { return node_ && node_->requires_grad; }

Shape Tensor::shape() const { return {value().rows(), value().cols()}; }

double Tensor::item() const {
  if (rows() != 1 || cols() != 1) throw ContractError("item(): tensor is not 1x1");
  return value()(0, 0);
}

Tensor Tensor::from_op(Matrix value, std::vector<Tensor> inputs, const char* op,
                       std::function<void(Node&)> backward) {
  if (g_finite_checks && !value.allFinite()) {
    throw NumericError(std::string("non-finite value produced by ") + op);
  }
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  n->op = op;
  if (t_grad_enabled) {
    for (const Tensor& t : inputs) n->requires_grad = n->requires_grad || t.requires_grad();
  }
  if (n->requires_grad) {
    n->inputs = std::move(inputs);
    n->backward = std::move(backward);
  }
  return Tensor(std::move(n));
}

void Tensor::backward() const {
  if (rows() != 1 || cols() != 1) throw ContractError("backward(): root must be 1x1");
  if (!requires_grad()) return;

  // Iterative post-order DFS gives a topological order of the graph.
  std::vector<Node*> order;
  std::unordered_set<Node*> visited;
  std::vector<std::pair<Node*, std::size_t>> stack{{node_.get(), 0}};
  visited.insert(node_.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->inputs.size()) {
      Node* child = node->inputs[next++].node();
      if (child->requires_grad && visited.insert(child).second) stack.push_back({child, 0});
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  // Intermediate gradients start from zero on every pass.
  for (Node* n : order) {
    if (n->backward) n->grad.resize(0, 0);
  }
  node_->accumulate(Matrix::Ones(1, 1));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* n = *it;
    if (!n->backward || n->grad.size() == 0) continue;
    n->backward(*n);
    if (g_finite_checks) {
      for (const Tensor& t : n->inputs) {
        if (t.requires_grad() && t.node()->grad.size() > 0 && !t.node()->grad.allFinite()) {
          throw NumericError(std::string("non-finite gradient in backward of ") + n->op);
        }
      }
    }
  }
}

// ---- primitives -----------------------------------------------------------

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) shape_error("matmul", a, b);
  Matrix out = a.value() * b.value();
  return Tensor::from_op(std::move(out), {a, b}, "matmul", [](Node& self) {
    Node& na = in(self, 0);
    Node& nb = in(self, 1);
    if (na.requires_grad) na.accumulate_expr(self.grad * nb.value.transpose());
    if (nb.requires_grad) nb.accumulate_expr(na.value.transpose() * self.grad);
  });
}

Tensor affine(const Tensor& x, const Tensor& w, const Tensor& b, bool relu) {
  if (x.cols() != w.rows()) shape_error("affine", x, w);
  if (b.rows() != 1 || b.cols() != w.cols()) shape_error("affine", w, b);
  Matrix out(x.rows(), w.cols());
  out.noalias() = x.value() * w.value();
  out.rowwise() += b.value().row(0);
  if (relu) out = out.cwiseMax(0.0);
  return Tensor::from_op(std::move(out), {x, w, b}, relu ? "affine_relu" : "affine",
                         [relu](Node& self) {
    Node& nx = in(self, 0);
    Node& nw = in(self, 1);
    Node& nb = in(self, 2);
    if (relu) {
      self.grad = (self.value.array() > 0.0).select(self.grad.array(), 0.0).matrix();
    }
    if (nw.requires_grad) nw.accumulate_expr(nx.value.transpose() * self.grad);
    if (nb.requires_grad) nb.accumulate_expr(self.grad.colwise().sum());
    if (nx.requires_grad) nx.accumulate_expr(self.grad * nw.value.transpose());
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  if (a.shape() == b.shape()) {
    return Tensor::from_op(a.value() + b.value(), {a, b}, "add", [](Node& self) {
      if (in(self, 0).requires_grad) in(self, 0).accumulate(self.grad);
      if (in(self, 1).requires_grad) in(self, 1).accumulate(self.grad);
    });
  }
  if (b.rows() == 1 && b.cols() == a.cols()) {
    Matrix out = a.value().rowwise() + b.value().row(0);
    return Tensor::from_op(std::move(out), {a, b}, "add_row", [](Node& self) {
      if (in(self, 0).requires_grad) in(self, 0).accumulate(self.grad);
      if (in(self, 1).requires_grad) in(self, 1).accumulate_expr(self.grad.colwise().sum());
    });
  }
  shape_error("add", a, b);
}

Tensor sub(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) shape_error("sub", a, b);
  return Tensor::from_op(a.value() - b.value(), {a, b}, "sub", [](Node& self) {
    if (in(self, 0).requires_grad) in(self, 0).accumulate(self.grad);
    if (in(self, 1).requires_grad) in(self, 1).accumulate_expr(-self.grad);
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) shape_error("mul", a, b);
  Matrix out = a.value().cwiseProduct(b.value());
  return Tensor::from_op(std::move(out), {a, b}, "mul", [](Node& self) {
    Node& na = in(self, 0);
    Node& nb = in(self, 1);
    if (na.requires_grad) na.accumulate_expr(self.grad.cwiseProduct(nb.value));
    if (nb.requires_grad) nb.accumulate_expr(self.grad.cwiseProduct(na.value));
  });
}

Tensor scale(const Tensor& a, double s) {
  return Tensor::from_op(a.value() * s, {a}, "scale", [s](Node& self) {
    in(self, 0).accumulate_expr(self.grad * s);
  });
}

Tensor one_minus(const Tensor& a) {
  Matrix out = (1.0 - a.value().array()).matrix();
  return Tensor::from_op(std::move(out), {a}, "one_minus", [](Node& self) {
    in(self, 0).accumulate_expr(-self.grad);
  });
}

Tensor scale_rows(const Tensor& a, const Tensor& s) {
  if (s.cols() != 1 || (s.rows() != a.rows() && s.rows() != 1)) shape_error("scale_rows", a, s);
  const bool broadcast = s.rows() == 1 && a.rows() != 1;
  Matrix out;
  if (broadcast) {
    out = a.value() * s.value()(0, 0);
  } else {
    out = s.value().col(0).asDiagonal() * a.value();
  }
  return Tensor::from_op(std::move(out), {a, s}, "scale_rows", [broadcast](Node& self) {
    Node& na = in(self, 0);
    Node& ns = in(self, 1);
    if (broadcast) {
      if (na.requires_grad) na.accumulate_expr(self.grad * ns.value(0, 0));
      if (ns.requires_grad) {
        ns.accumulate(Matrix::Constant(1, 1, self.grad.cwiseProduct(na.value).sum()));
      }
      return;
    }
    if (na.requires_grad) na.accumulate_expr(ns.value.col(0).asDiagonal() * self.grad);
    if (ns.requires_grad) ns.accumulate_expr(self.grad.cwiseProduct(na.value).rowwise().sum());
  });
}

Tensor relu(const Tensor& a) {
  Matrix out = a.value().cwiseMax(0.0);
  return Tensor::from_op(std::move(out), {a}, "relu", [](Node& self) {
    in(self, 0).accumulate_expr(
        (self.value.array() > 0.0).select(self.grad.array(), 0.0).matrix());
  });
}

Tensor sigmoid(const Tensor& a) {
  Matrix out = a.value().unaryExpr([](double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
  });
  return Tensor::from_op(std::move(out), {a}, "sigmoid", [](Node& self) {
    const auto& y = self.value.array();
    in(self, 0).accumulate_expr((self.grad.array() * y * (1.0 - y)).matrix());
  });
}

Tensor tanh(const Tensor& a) {
  Matrix out = a.value().array().tanh().matrix();
  return Tensor::from_op(std::move(out), {a}, "tanh", [](Node& self) {
    const auto& y = self.value.array();
    in(self, 0).accumulate_expr((self.grad.array() * (1.0 - y * y)).matrix());
  });
}

Tensor softmax_rows(const Tensor& a) {
  if (a.cols() == 0) throw ContractError("softmax_rows: empty axis");
  Matrix out(a.rows(), a.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    const double m = a.value().row(r).maxCoeff();
    out.row(r) = (a.value().row(r).array() - m).exp().matrix();
    out.row(r) /= out.row(r).sum();
  }
  return Tensor::from_op(std::move(out), {a}, "softmax", [](Node& self) {
    const Matrix& y = self.value;
    Eigen::VectorXd dot = self.grad.cwiseProduct(y).rowwise().sum();
    Matrix g = y.cwiseProduct(self.grad - dot.replicate(1, y.cols()));
    in(self, 0).accumulate(g);
  });
}

Tensor segment_max_rows(const Tensor& a, Eigen::Index segments) {
  if (segments < 0 || (segments == 0 && a.rows() != 0) ||
      (segments > 0 && a.rows() % segments != 0) || (segments > 0 && a.rows() == 0)) {
    throw ContractError("segment_max_rows: rows not divisible into non-empty segments");
  }
  const Eigen::Index cols = a.cols();
  Matrix out(segments, cols);
  std::vector<Eigen::Index> argmax(static_cast<std::size_t>(segments * cols));
  if (segments > 0) {
    const Eigen::Index height = a.rows() / segments;
    const Matrix& v = a.value();
    for (Eigen::Index s = 0; s < segments; ++s) {
      const Eigen::Index base = s * height;
      for (Eigen::Index c = 0; c < cols; ++c) {
        Eigen::Index best = base;
        double bv = v(base, c);
        for (Eigen::Index r = base + 1; r < base + height; ++r) {
          if (v(r, c) > bv) {
            bv = v(r, c);
            best = r;
          }
        }
        out(s, c) = bv;
        argmax[s * cols + c] = best;
      }
    }
  }
  return Tensor::from_op(std::move(out), {a}, "segment_max",
                         [argmax = std::move(argmax), cols](Node& self) {
                           Node& na = in(self, 0);
                           na.ensure_grad();
                           for (Eigen::Index s = 0; s < self.grad.rows(); ++s) {
                             for (Eigen::Index c = 0; c < cols; ++c) {
                               na.grad(argmax[s * cols + c], c) += self.grad(s, c);
                             }
                           }
                         });
}

Tensor concat_cols(std::span<const Tensor> parts) {
  if (parts.empty()) throw ContractError("concat_cols: no inputs");
  const Eigen::Index rows = parts[0].rows();
  Eigen::Index cols = 0;
  for (const Tensor& p : parts) {
    if (p.rows() != rows) shape_error("concat_cols", parts[0], p);
    cols += p.cols();
  }
  Matrix out(rows, cols);
  std::vector<Eigen::Index> offsets;
  Eigen::Index off = 0;
  for (const Tensor& p : parts) {
    out.middleCols(off, p.cols()) = p.value();
    offsets.push_back(off);
    off += p.cols();
  }
  return Tensor::from_op(std::move(out), {parts.begin(), parts.end()}, "concat_cols",
                         [offsets = std::move(offsets)](Node& self) {
                           for (std::size_t k = 0; k < self.inputs.size(); ++k) {
                             Node& n = in(self, k);
                             if (n.requires_grad) {
                               n.accumulate_expr(self.grad.middleCols(offsets[k], n.value.cols()));
                             }
                           }
                         });
}

Tensor concat_rows(std::span<const Tensor> parts) {
  if (parts.empty()) throw ContractError("concat_rows: no inputs");
  const Eigen::Index cols = parts[0].cols();
  Eigen::Index rows = 0;
  for (const Tensor& p : parts) {
    if (p.cols() != cols) shape_error("concat_rows", parts[0], p);
    rows += p.rows();
  }
  Matrix out(rows, cols);
  std::vector<Eigen::Index> offsets;
  Eigen::Index off = 0;
  for (const Tensor& p : parts) {
    out.middleRows(off, p.rows()) = p.value();
    offsets.push_back(off);
    off += p.rows();
  }
  return Tensor::from_op(std::move(out), {parts.begin(), parts.end()}, "concat_rows",
                         [offsets = std::move(offsets)](Node& self) {
                           for (std::size_t k = 0; k < self.inputs.size(); ++k) {
                             Node& n = in(self, k);
                             if (n.requires_grad) {
                               n.accumulate_expr(self.grad.middleRows(offsets[k], n.value.rows()));
                             }
                           }
                         });
}

Tensor slice_cols(const Tensor& a, Eigen::Index start, Eigen::Index count) {
  if (start < 0 || count < 0 || start + count > a.cols()) {
    throw ContractError("slice_cols: range out of bounds");
  }
  Matrix out = a.value().middleCols(start, count);
  return Tensor::from_op(std::move(out), {a}, "slice_cols", [start, count](Node& self) {
    Node& na = in(self, 0);
    na.ensure_grad();
    na.grad.middleCols(start, count) += self.grad;
  });
}

Tensor gather_rows(const Tensor& a, std::span<const int> index) {
  Matrix out(static_cast<Eigen::Index>(index.size()), a.cols());
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] < 0 || index[k] >= a.rows()) throw ContractError("gather_rows: index out of range");
    out.row(static_cast<Eigen::Index>(k)) = a.value().row(index[k]);
  }
  return Tensor::from_op(std::move(out), {a}, "gather_rows",
                         [idx = std::vector<int>(index.begin(), index.end())](Node& self) {
                           Node& na = in(self, 0);
                           na.ensure_grad();
                           for (std::size_t k = 0; k < idx.size(); ++k) {
                             na.grad.row(idx[k]) += self.grad.row(static_cast<Eigen::Index>(k));
                           }
                         });
}

Tensor scatter_add_rows(const Tensor& a, std::span<const int> index, Eigen::Index rows) {
  if (static_cast<Eigen::Index>(index.size()) != a.rows()) {
    throw ContractError("scatter_add_rows: index length must equal input rows");
  }
  Matrix out = Matrix::Zero(rows, a.cols());
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] < 0 || index[k] >= rows) throw ContractError("scatter_add_rows: index out of range");
    out.row(index[k]) += a.value().row(static_cast<Eigen::Index>(k));
  }
  return Tensor::from_op(std::move(out), {a}, "scatter_add_rows",
                         [idx = std::vector<int>(index.begin(), index.end())](Node& self) {
                           Matrix g(static_cast<Eigen::Index>(idx.size()), self.grad.cols());
                           for (std::size_t k = 0; k < idx.size(); ++k) {
                             g.row(static_cast<Eigen::Index>(k)) = self.grad.row(idx[k]);
                           }
                           in(self, 0).accumulate(g);
                         });
}

Tensor sum(const Tensor& a) {
  return Tensor::from_op(Matrix::Constant(1, 1, a.value().sum()), {a}, "sum", [](Node& self) {
    Node& na = in(self, 0);
    na.accumulate_expr(Matrix::Constant(na.value.rows(), na.value.cols(), self.grad(0, 0)));
  });
}

Tensor mean(const Tensor& a) {
  if (a.value().size() == 0) throw ContractError("mean: empty tensor");
  const double n = static_cast<double>(a.value().size());
  return Tensor::from_op(Matrix::Constant(1, 1, a.value().sum() / n), {a}, "mean",
                         [n](Node& self) {
                           Node& na = in(self, 0);
                           na.accumulate_expr(Matrix::Constant(na.value.rows(), na.value.cols(),
                                                               self.grad(0, 0) / n));
                         });
}

Tensor cross_entropy(const Tensor& logits, std::span<const int> labels) {
  const Eigen::Index n = logits.rows();
  if (static_cast<Eigen::Index>(labels.size()) != n) {
    throw ContractError("cross_entropy: one label per row required");
  }
  if (n == 0 || logits.cols() == 0) throw ContractError("cross_entropy: empty input");
  Matrix probs(n, logits.cols());
  double loss = 0.0;
  for (Eigen::Index r = 0; r < n; ++r) {
    const int y = labels[static_cast<std::size_t>(r)];
    if (y < 0 || y >= logits.cols()) throw ContractError("cross_entropy: label out of range");
    const auto row = logits.value().row(r);
    const double m = row.maxCoeff();
    const double lse = m + std::log((row.array() - m).exp().sum());
    loss += lse - row(y);
    probs.row(r) = (row.array() - lse).exp().matrix();
  }
  loss /= static_cast<double>(n);
  return Tensor::from_op(
      Matrix::Constant(1, 1, loss), {logits}, "cross_entropy",
      [probs = std::move(probs), y = std::vector<int>(labels.begin(), labels.end())](Node& self) {
        Matrix g = probs;
        for (std::size_t r = 0; r < y.size(); ++r) g(static_cast<Eigen::Index>(r), y[r]) -= 1.0;
        g *= self.grad(0, 0) / static_cast<double>(y.size());
        in(self, 0).accumulate(g);
      });
}

Tensor per_class_bce(const Tensor& logits, const Matrix& targets) {
  if (logits.rows() != targets.rows() || logits.cols() != targets.cols()) {
    throw ContractError("per_class_bce: target shape mismatch");
  }
  const double count = static_cast<double>(logits.value().size());
  if (count == 0) throw ContractError("per_class_bce: empty input");
  const auto x = logits.value().array();
  // softplus(x) - t * x, with softplus(x) = max(x, 0) + log1p(exp(-|x|)).
  const double loss =
      ((x.max(0.0) + (-x.abs()).exp().log1p()) - targets.array() * x).sum() / count;
  return Tensor::from_op(Matrix::Constant(1, 1, loss), {logits}, "per_class_bce",
                         [targets, count](Node& self) {
                           Node& nl = in(self, 0);
                           Matrix s = nl.value.unaryExpr([](double v) {
                             if (v >= 0) return 1.0 / (1.0 + std::exp(-v));
                             const double e = std::exp(v);
                             return e / (1.0 + e);
                           });
                           nl.accumulate_expr((s - targets) * (self.grad(0, 0) / count));
                         });
}

Tensor bce_probs(const Tensor& probs, const Matrix& targets, double eps) {
  if (probs.rows() != targets.rows() || probs.cols() != targets.cols()) {
    throw ContractError("bce_probs: target shape mismatch");
  }
  const double count = static_cast<double>(probs.value().size());
  if (count == 0) throw ContractError("bce_probs: empty input");
  const auto p = probs.value().array().max(eps).min(1.0 - eps);
  const auto t = targets.array();
  const double loss = -(t * p.log() + (1.0 - t) * (1.0 - p).log()).sum() / count;
  return Tensor::from_op(Matrix::Constant(1, 1, loss), {probs}, "bce_probs",
                         [targets, eps, count](Node& self) {
                           Node& np = in(self, 0);
                           Matrix g(np.value.rows(), np.value.cols());
                           for (Eigen::Index r = 0; r < g.rows(); ++r) {
                             for (Eigen::Index c = 0; c < g.cols(); ++c) {
                               const double pv = np.value(r, c);
                               const double tv = targets(r, c);
                               g(r, c) = (pv < eps || pv > 1.0 - eps)
                                             ? 0.0
                                             : (-tv / pv + (1.0 - tv) / (1.0 - pv));
                             }
                           }
                           np.accumulate_expr(g * (self.grad(0, 0) / count));
                         });
}

double gate_value(double x, double alpha, double beta) {
  if (x <= beta) return 0.0;
  if (x >= 1.0 / alpha + beta) return 1.0;
  return alpha * x - alpha * beta;
}

Tensor gate(const Tensor& x, const Tensor& alpha, const Tensor& beta) {
  if (x.cols() != 1 || alpha.shape() != Shape{1, 1} || beta.shape() != Shape{1, 1}) {
    throw ContractError("gate: expects R x 1 input and 1 x 1 alpha, beta");
  }
  const double a = alpha.item(), b = beta.item();
  Matrix out = x.value().unaryExpr([a, b](double v) { return gate_value(v, a, b); });
  return Tensor::from_op(std::move(out), {x, alpha, beta}, "gate", [a, b](Node& self) {
    Node& nx = in(self, 0);
    Node& na = in(self, 1);
    Node& nb = in(self, 2);
    const double upper = 1.0 / a + b;
    Matrix gx = Matrix::Zero(nx.value.rows(), 1);
    double ga = 0.0, gb = 0.0;
    for (Eigen::Index r = 0; r < gx.rows(); ++r) {
      const double v = nx.value(r, 0);
      if (v <= b || v >= upper) continue;
      const double g = self.grad(r, 0);
      gx(r, 0) = a * g;
      ga += (v - b) * g;
      gb += -a * g;
    }
    if (nx.requires_grad) nx.accumulate(gx);
    if (na.requires_grad) na.accumulate(Matrix::Constant(1, 1, ga));
    if (nb.requires_grad) nb.accumulate(Matrix::Constant(1, 1, gb));
  });
}

}  // namespace insg::nn
