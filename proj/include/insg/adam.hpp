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

#include <cstdint>
#include <vector>

#include "insg/layers.hpp"

namespace insg::nn {

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  // Throws ConfigError when lr <= 0 or a beta lies outside [0, 1).
  void validate() const;
};

// First and second moment estimates, one pair per parameter tensor.
struct AdamState {
  std::int64_t step = 0;
  std::vector<Matrix> m;
  std::vector<Matrix> v;

  // Zero moments shaped like the store's parameters.
  static AdamState zeros_like(const ParamStore& params);
  friend bool operator==(const AdamState&, const AdamState&) = default;
};

// One bias-corrected Adam update of a single tensor at step t >= 1.
void adam_update(Matrix& param, const Matrix& grad, Matrix& m, Matrix& v, std::int64_t t,
                 const AdamConfig& config);

// Applies one step to every parameter using its accumulated gradient.
void adam_step(ParamStore& params, AdamState& state, const AdamConfig& config);

// Rescales all gradients so their global L2 norm is at most max_norm.
// Returns the norm before clipping.
double clip_grad_norm(ParamStore& params, double max_norm);

}  // namespace insg::nn
