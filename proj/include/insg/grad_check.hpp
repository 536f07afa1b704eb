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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "insg/tensor.hpp"

namespace insg::nn {

struct GradCheckOptions {
  double step = 1e-4;       // central-difference step h
  // 5: fourth-order stencil (f(x±h), f(x±2h)); 3: plain (f(x+h) - f(x-h)) / 2h,
  // which stays inside narrower kink-free windows.
  int stencil = 5;
  double tolerance = 1e-5;  // max allowed relative error
  // Denominator floor: rel = |a - n| / max(|a|, |n|, floor).
  double floor = 1e-6;
  // Coordinates checked per input; <= 0 checks every coordinate, otherwise a
  // seeded random subset.
  int max_coords_per_input = 0;
  std::uint64_t seed = 0;
};

struct InputGradReport {
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  long coords_checked = 0;
};

struct GradCheckReport {
  std::vector<InputGradReport> inputs;
  double max_rel_error = 0.0;
  bool passed = true;
};

// Compares reverse-mode gradients of the scalar `f` w.r.t. each leaf in
// `inputs` against central differences. `f` must read the inputs' current
// values; they are perturbed in place and restored.
GradCheckReport grad_check(const std::function<Tensor()>& f, std::span<Tensor> inputs,
                           const GradCheckOptions& options = {});

}  // namespace insg::nn
