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

#include "insg/errors.hpp"
#include "insg/layers.hpp"

namespace {

using insg::nn::Matrix;
using insg::nn::Tensor;
namespace nn = insg::nn;

double sigm(double x) { return 1.0 / (1.0 + std::exp(-x)); }

TEST(ParamStore, RejectsDuplicateNames) {
  nn::ParamStore s;
  s.add("w", Matrix::Zero(2, 2));
  EXPECT_THROW(s.add("w", Matrix::Zero(1, 1)), insg::ContractError);
  EXPECT_TRUE(s.contains("w"));
  EXPECT_EQ(s.num_scalars(), 4u);
}

TEST(Linear, InitIsBoundedAndSeeded) {
  nn::ParamStore a, b;
  insg::Rng ra(7), rb(7);
  nn::Linear la(a, "l", 16, 8, ra), lb(b, "l", 16, 8, rb);
  EXPECT_EQ(la.weight().value(), lb.weight().value());
  EXPECT_LE(la.weight().value().cwiseAbs().maxCoeff(), 0.25);
  EXPECT_EQ(la.in_features(), 16);
  EXPECT_EQ(la.out_features(), 8);
}

TEST(Mlp, ReluOnHiddenLayersOnly) {
  nn::ParamStore s;
  insg::Rng rng(1);
  nn::Mlp mlp(s, "m", {3, 4, 2}, rng);
  Tensor x = Tensor::constant(Matrix::Random(5, 3));
  const auto& L = mlp.layers();
  const Matrix h = ((x.value() * L[0].weight().value()).rowwise() +
                    L[0].bias().value().row(0)).cwiseMax(0.0);
  const Matrix y = (h * L[1].weight().value()).rowwise() + L[1].bias().value().row(0);
  EXPECT_TRUE(mlp(x).value().isApprox(y, 1e-12));
  EXPECT_EQ(s.size(), 4u);
}

// Scalar GRU: r = s(Wr m + Ur h + b), z likewise, n = tanh(Wn m + bn + r (Un h + cn)),
// h' = (1 - z) h + z n.
TEST(GruCell, MatchesScalarOracle) {
  nn::ParamStore s;
  insg::Rng rng(3);
  const int I = 3, H = 2;
  nn::GruCell cell(s, "g", I, H, rng);
  Matrix h(2, H), m(2, I);
  h << 0.1, -0.4, 0.7, 0.2;
  m << 1.0, -0.5, 0.3, 0.0, 0.9, -1.2;
  const Matrix out = nn::gru_cell(Tensor::constant(h), Tensor::constant(m), cell).value();
  const Matrix& Wi = cell.input_weight().value();
  const Matrix& Wh = cell.hidden_weight().value();
  const Matrix& bi = cell.input_bias().value();
  const Matrix& bh = cell.hidden_bias().value();
  for (int row = 0; row < 2; ++row) {
    for (int k = 0; k < H; ++k) {
      auto gi = [&](int block) {
        double v = bi(0, block * H + k);
        for (int c = 0; c < I; ++c) v += m(row, c) * Wi(c, block * H + k);
        return v;
      };
      auto gh = [&](int block) {
        double v = bh(0, block * H + k);
        for (int c = 0; c < H; ++c) v += h(row, c) * Wh(c, block * H + k);
        return v;
      };
      const double r = sigm(gi(0) + gh(0));
      const double z = sigm(gi(1) + gh(1));
      const double n = std::tanh(gi(2) + r * gh(2));
      EXPECT_NEAR(out(row, k), (1 - z) * h(row, k) + z * n, 1e-12);
    }
  }
}

TEST(GruCell, WidthMismatchThrows) {
  nn::ParamStore s;
  insg::Rng rng(0);
  nn::GruCell cell(s, "g", 3, 2, rng);
  EXPECT_THROW(cell(Tensor::zeros(1, 3), Tensor::zeros(1, 3)), insg::ContractError);
}

}  // namespace
