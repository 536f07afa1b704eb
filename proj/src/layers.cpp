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

#include "insg/layers.hpp"

#include <cmath>

#include "insg/errors.hpp"

namespace insg::nn {

Tensor ParamStore::add(const std::string& name, Matrix init) {
  if (index_.count(name)) throw ContractError("duplicate parameter name: " + name);
  index_[name] = entries_.size();
  entries_.push_back({name, Tensor::parameter(std::move(init))});
  return entries_.back().tensor;
}

const Tensor& ParamStore::get(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw ContractError("unknown parameter: " + name);
  return entries_[it->second].tensor;
}

std::size_t ParamStore::num_scalars() const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += static_cast<std::size_t>(e.tensor.value().size());
  return n;
}

void ParamStore::zero_grad() {
  for (auto& e : entries_) e.tensor.zero_grad();
}

namespace {

Matrix uniform_matrix(Eigen::Index rows, Eigen::Index cols, double bound, Rng& rng) {
  std::uniform_real_distribution<double> u(-bound, bound);
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = u(rng);
  }
  return m;
}

}  // namespace

Linear::Linear(ParamStore& store, const std::string& name, int in, int out, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  weight_ = store.add(name + ".weight", uniform_matrix(in, out, bound, rng));
  bias_ = store.add(name + ".bias", uniform_matrix(1, out, bound, rng));
}

Tensor Linear::operator()(const Tensor& x) const {
  return affine(x, weight_, bias_, false);
}

Tensor Linear::forward(const Tensor& x, bool relu) const {
  return affine(x, weight_, bias_, relu);
}

Mlp::Mlp(ParamStore& store, const std::string& name, const std::vector<int>& widths, Rng& rng,
         bool relu_last)
    : relu_last_(relu_last) {
  if (widths.size() < 2) throw ContractError("Mlp needs at least input and output widths");
  for (std::size_t k = 0; k + 1 < widths.size(); ++k) {
    layers_.emplace_back(store, name + "." + std::to_string(k), widths[k], widths[k + 1], rng);
  }
}

Tensor Mlp::operator()(const Tensor& x) const {
  Tensor h = x;
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    h = layers_[k].forward(h, k + 1 < layers_.size() || relu_last_);
  }
  return h;
}

GruCell::GruCell(ParamStore& store, const std::string& name, int input, int hidden, Rng& rng)
    : input_(input), hidden_(hidden) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  w_input_ = store.add(name + ".weight_input", uniform_matrix(input, 3 * hidden, bound, rng));
  w_hidden_ = store.add(name + ".weight_hidden", uniform_matrix(hidden, 3 * hidden, bound, rng));
  b_input_ = store.add(name + ".bias_input", uniform_matrix(1, 3 * hidden, bound, rng));
  b_hidden_ = store.add(name + ".bias_hidden", uniform_matrix(1, 3 * hidden, bound, rng));
}

Tensor GruCell::operator()(const Tensor& h, const Tensor& m) const {
  if (h.cols() != hidden_ || m.cols() != input_ || h.rows() != m.rows()) {
    throw ContractError("GruCell: width mismatch");
  }
  const Eigen::Index H = hidden_;
  Tensor gi = add(matmul(m, w_input_), b_input_);
  Tensor gh = add(matmul(h, w_hidden_), b_hidden_);
  Tensor r = sigmoid(add(slice_cols(gi, 0, H), slice_cols(gh, 0, H)));
  Tensor z = sigmoid(add(slice_cols(gi, H, H), slice_cols(gh, H, H)));
  Tensor n = tanh(add(slice_cols(gi, 2 * H, H), mul(r, slice_cols(gh, 2 * H, H))));
  return add(mul(one_minus(z), h), mul(z, n));
}

Tensor gru_cell(const Tensor& h, const Tensor& m, const GruCell& cell) { return cell(h, m); }

}  // namespace insg::nn
