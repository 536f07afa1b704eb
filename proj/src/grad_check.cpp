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

#include "insg/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "insg/errors.hpp"
#include "insg/rng.hpp"

namespace insg::nn {

GradCheckReport grad_check(const std::function<Tensor()>& f, std::span<Tensor> inputs,
                           const GradCheckOptions& opt) {
  if (opt.stencil != 3 && opt.stencil != 5) throw ContractError("grad_check: stencil must be 3 or 5");
  for (Tensor& t : inputs) {
    if (!t.requires_grad()) throw ContractError("grad_check: inputs must be parameters");
    t.zero_grad();
  }
  f().backward();
  std::vector<Matrix> analytic;
  for (Tensor& t : inputs) analytic.push_back(t.grad());

  Rng rng(mix_seed(opt.seed));
  GradCheckReport report;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    Matrix& v = inputs[k].mutable_value();
    std::vector<Eigen::Index> coords(static_cast<std::size_t>(v.size()));
    std::iota(coords.begin(), coords.end(), Eigen::Index{0});
    if (opt.max_coords_per_input > 0 &&
        coords.size() > static_cast<std::size_t>(opt.max_coords_per_input)) {
      std::shuffle(coords.begin(), coords.end(), rng);
      coords.resize(static_cast<std::size_t>(opt.max_coords_per_input));
    }
    InputGradReport r;
    NoGradGuard no_grad;
    for (Eigen::Index c : coords) {
      double& x = v.data()[c];
      const double saved = x;
      auto at = [&](double dx) {
        x = saved + dx;
        return f().item();
      };
      const double h = opt.step;
      const double d1 = at(h) - at(-h);
      double numeric = d1 / (2.0 * h);
      if (opt.stencil == 5) {
        const double d2 = at(2 * h) - at(-2 * h);
        numeric = (8.0 * d1 - d2) / (12.0 * h);
      }
      x = saved;
      const double a = analytic[k].data()[c];
      const double abs_err = std::abs(a - numeric);
      const double rel = abs_err / std::max({std::abs(a), std::abs(numeric), opt.floor});
      r.max_abs_error = std::max(r.max_abs_error, abs_err);
      r.max_rel_error = std::max(r.max_rel_error, rel);
      ++r.coords_checked;
    }
    report.max_rel_error = std::max(report.max_rel_error, r.max_rel_error);
    report.inputs.push_back(r);
  }
  report.passed = report.max_rel_error <= opt.tolerance;
  for (Tensor& t : inputs) t.zero_grad();
  return report;
}

}  // namespace insg::nn
