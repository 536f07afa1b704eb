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

#include <gtest/gtest.h>

#include <cmath>

#include "insg/adam.hpp"
#include "insg/errors.hpp"

namespace {

using insg::nn::Matrix;
namespace nn = insg::nn;

// Element-wise reference written directly from the update rule.
struct ScalarAdam {
  double m = 0, v = 0;
  long t = 0;
  double step(double p, double g, const nn::AdamConfig& c) {
    ++t;
    m = c.beta1 * m + (1 - c.beta1) * g;
    v = c.beta2 * v + (1 - c.beta2) * g * g;
    const double mh = m / (1 - std::pow(c.beta1, t));
    const double vh = v / (1 - std::pow(c.beta2, t));
    return p - c.lr * mh / (std::sqrt(vh) + c.eps);
  }
};

TEST(Adam, FirstStepMovesByLr) {
  nn::AdamConfig c;
  c.lr = 0.01;
  Matrix p = Matrix::Constant(1, 2, 1.0), g(1, 2), m = Matrix::Zero(1, 2), v = Matrix::Zero(1, 2);
  g << 3.0, -0.5;
  nn::adam_update(p, g, m, v, 1, c);
  EXPECT_NEAR(p(0, 0), 1.0 - 0.01, 1e-9);
  EXPECT_NEAR(p(0, 1), 1.0 + 0.01, 1e-9);
}

TEST(Adam, MatchesScalarReferenceOverManySteps) {
  nn::ParamStore store;
  nn::Tensor w = store.add("w", Matrix::Constant(1, 1, 2.0));
  nn::AdamConfig c;
  c.lr = 0.05;
  nn::AdamState st = nn::AdamState::zeros_like(store);
  ScalarAdam ref;
  double p = 2.0;
  for (int k = 0; k < 200; ++k) {
    store.zero_grad();
    nn::Tensor loss = nn::sum(nn::mul(w, w));
    loss.backward();
    p = ref.step(p, 2 * p, c);
    nn::adam_step(store, st, c);
    ASSERT_NEAR(w.value()(0, 0), p, 1e-12);
  }
  EXPECT_EQ(st.step, 200);
  EXPECT_LT(std::abs(p), 0.1);
}

TEST(Adam, ValidatesConfig) {
  nn::AdamConfig c;
  c.lr = 0;
  EXPECT_THROW(c.validate(), insg::ConfigError);
  c.lr = 1e-3;
  c.beta2 = 1.0;
  EXPECT_THROW(c.validate(), insg::ConfigError);
}

TEST(Adam, StateMustMatchStore) {
  nn::ParamStore store;
  store.add("w", Matrix::Zero(1, 1));
  nn::AdamState st;
  EXPECT_THROW(nn::adam_step(store, st, {}), insg::ContractError);
}

TEST(ClipGradNorm, ScalesToMaxNorm) {
  nn::ParamStore store;
  nn::Tensor a = store.add("a", Matrix::Constant(1, 1, 3.0));
  nn::Tensor b = store.add("b", Matrix::Constant(1, 1, 4.0));
  nn::sum(nn::add(nn::scale(a, 3.0), nn::scale(b, 4.0))).backward();
  EXPECT_NEAR(nn::clip_grad_norm(store, 1.0), 5.0, 1e-12);
  EXPECT_NEAR(a.grad()(0, 0), 0.6, 1e-12);
  EXPECT_NEAR(b.grad()(0, 0), 0.8, 1e-12);
}

}  // namespace
