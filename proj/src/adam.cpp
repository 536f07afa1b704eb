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

#include "insg/adam.hpp"

#include <cmath>

#include "insg/errors.hpp"

namespace insg::nn {

void AdamConfig::validate() const {
  if (!(lr > 0)) throw ConfigError("adam: learning rate must be > 0");
  if (!(beta1 >= 0 && beta1 < 1) || !(beta2 >= 0 && beta2 < 1)) {
    throw ConfigError("adam: betas must lie in [0, 1)");
  }
  if (!(eps > 0)) throw ConfigError("adam: eps must be > 0");
}

AdamState AdamState::zeros_like(const ParamStore& params) {
  AdamState s;
  for (const auto& e : params.entries()) {
    s.m.push_back(Matrix::Zero(e.tensor.rows(), e.tensor.cols()));
    s.v.push_back(Matrix::Zero(e.tensor.rows(), e.tensor.cols()));
  }
  return s;
}

void adam_update(Matrix& param, const Matrix& grad, Matrix& m, Matrix& v, std::int64_t t,
                 const AdamConfig& c) {
  m = c.beta1 * m + (1.0 - c.beta1) * grad;
  v = c.beta2 * v + (1.0 - c.beta2) * grad.cwiseProduct(grad);
  const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(t));
  param.array() -= c.lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + c.eps);
}

void adam_step(ParamStore& params, AdamState& state, const AdamConfig& config) {
  config.validate();
  const auto& entries = params.entries();
  if (state.m.size() != entries.size() || state.v.size() != entries.size()) {
    throw ContractError("adam_step: state does not match parameter store");
  }
  ++state.step;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    Tensor p = entries[k].tensor;
    adam_update(p.mutable_value(), p.grad(), state.m[k], state.v[k], state.step, config);
  }
}

double clip_grad_norm(ParamStore& params, double max_norm) {
  double sq = 0.0;
  for (const auto& e : params.entries()) sq += e.tensor.grad().squaredNorm();
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0) {
    const double s = max_norm / norm;
    for (const auto& e : params.entries()) {
      e.tensor.node()->grad *= s;
    }
  }
  return norm;
}

}  // namespace insg::nn
