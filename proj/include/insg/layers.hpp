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

#include <map>
#include <string>
#include <vector>

#include "insg/rng.hpp"
#include "insg/tensor.hpp"

namespace insg::nn {

// Owns every learnable tensor under a unique, stable name. Iteration order is
// registration order.
class ParamStore {
 public:
  // Throws ContractError on a duplicate name.
  Tensor add(const std::string& name, Matrix init);

  const Tensor& get(const std::string& name) const;
  bool contains(const std::string& name) const { return index_.count(name) > 0; }
  std::size_t size() const { return entries_.size(); }
  std::size_t num_scalars() const;

  struct Entry {
    std::string name;
    Tensor tensor;
  };
  const std::vector<Entry>& entries() const { return entries_; }

  void zero_grad();

 private:
  std::vector<Entry> entries_;
  std::map<std::string, std::size_t> index_;
};

// x * W + b with W in x out, uniform(-1/sqrt(in), 1/sqrt(in)) init.
class Linear {
 public:
  Linear() = default;
  Linear(ParamStore& store, const std::string& name, int in, int out, Rng& rng);

  Tensor operator()(const Tensor& x) const;
  // With `relu`, the activation is fused into the same node.
  Tensor forward(const Tensor& x, bool relu) const;
  int in_features() const { return static_cast<int>(weight_.rows()); }
  int out_features() const { return static_cast<int>(weight_.cols()); }
  const Tensor& weight() const { return weight_; }
  const Tensor& bias() const { return bias_; }

 private:
  Tensor weight_;
  Tensor bias_;
};

// Stack of Linear layers with ReLU between them, and optionally after the
// last one.
class Mlp {
 public:
  Mlp() = default;
  Mlp(ParamStore& store, const std::string& name, const std::vector<int>& widths, Rng& rng,
      bool relu_last = false);

  Tensor operator()(const Tensor& x) const;
  int in_features() const { return layers_.front().in_features(); }
  int out_features() const { return layers_.back().out_features(); }
  const std::vector<Linear>& layers() const { return layers_; }

 private:
  std::vector<Linear> layers_;
  bool relu_last_ = false;
};

// Gated recurrent unit over row batches:
//   r  = sigmoid(m W_ir + b_ir + h W_hr + b_hr)
//   z  = sigmoid(m W_iz + b_iz + h W_hz + b_hz)
//   n  = tanh(m W_in + b_in + r * (h W_hn + b_hn))
//   h' = (1 - z) * h + z * n
// so a closed update gate (z = 0) keeps the previous state.
class GruCell {
 public:
  GruCell() = default;
  GruCell(ParamStore& store, const std::string& name, int input, int hidden, Rng& rng);

  // h: R x hidden, m: R x input. Throws ContractError on width mismatch.
  Tensor operator()(const Tensor& h, const Tensor& m) const;

  int input_size() const { return input_; }
  int hidden_size() const { return hidden_; }
  // Fused gate parameters, column blocks ordered [r | z | n].
  const Tensor& input_weight() const { return w_input_; }
  const Tensor& hidden_weight() const { return w_hidden_; }
  const Tensor& input_bias() const { return b_input_; }
  const Tensor& hidden_bias() const { return b_hidden_; }

 private:
  int input_ = 0;
  int hidden_ = 0;
  Tensor w_input_, w_hidden_, b_input_, b_hidden_;
};

Tensor gru_cell(const Tensor& h, const Tensor& m, const GruCell& cell);

}  // namespace insg::nn
