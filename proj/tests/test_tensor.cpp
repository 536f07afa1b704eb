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
#include <vector>

#include "grad_suite.hpp"
#include "insg/errors.hpp"
#include "insg/grad_check.hpp"
#include "insg/tensor.hpp"

namespace {

using insg::ContractError;
using insg::nn::Matrix;
using insg::nn::Tensor;
namespace nn = insg::nn;

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

TEST(Tensor, SquareGradientIsTwoX) {
  Tensor x = Tensor::parameter(mat({{3.0}}));
  Tensor y = nn::mul(x, x);
  y.backward();
  EXPECT_DOUBLE_EQ(y.item(), 9.0);
  EXPECT_DOUBLE_EQ(x.grad()(0, 0), 6.0);

  std::vector<Tensor> in{x};
  const auto report = nn::grad_check([&] { return nn::mul(x, x); }, in);
  EXPECT_TRUE(report.passed);
  EXPECT_LT(report.max_rel_error, 1e-8);
}

TEST(Tensor, GradientsAccumulateAcrossUses) {
  Tensor x = Tensor::parameter(mat({{1.0, 2.0}}));
  Tensor y = nn::sum(nn::add(nn::scale(x, 2.0), nn::mul(x, x)));
  y.backward();
  EXPECT_DOUBLE_EQ(x.grad()(0, 0), 4.0);
  EXPECT_DOUBLE_EQ(x.grad()(0, 1), 6.0);
}

TEST(Tensor, ConstantsCarryNoGraph) {
  Tensor c = Tensor::constant(mat({{1.0}}));
  Tensor y = nn::scale(c, 2.0);
  EXPECT_FALSE(y.requires_grad());
  Tensor p = Tensor::parameter(mat({{1.0}}));
  {
    nn::NoGradGuard guard;
    EXPECT_FALSE(nn::scale(p, 2.0).requires_grad());
  }
  EXPECT_TRUE(nn::scale(p, 2.0).requires_grad());
}

TEST(Tensor, BroadcastAddRow) {
  Tensor a = Tensor::constant(mat({{1, 2}, {3, 4}}));
  Tensor b = Tensor::constant(mat({{10, 20}}));
  EXPECT_EQ(nn::add(a, b).value(), mat({{11, 22}, {13, 24}}));
  EXPECT_THROW(nn::add(a, Tensor::constant(mat({{1, 2, 3}}))), ContractError);
}

TEST(Tensor, MatmulShapeMismatchThrows) {
  Tensor a = Tensor::constant(Matrix::Ones(2, 3));
  EXPECT_THROW(nn::matmul(a, a), ContractError);
}

TEST(Tensor, AffineMatchesComposition) {
  Tensor x = Tensor::constant(mat({{1, -2}, {0.5, 3}}));
  Tensor w = Tensor::constant(mat({{1, 0, -1}, {2, 1, 0}}));
  Tensor b = Tensor::constant(mat({{0.1, -5, 0}}));
  const Matrix plain = nn::add(nn::matmul(x, w), b).value();
  EXPECT_TRUE(nn::affine(x, w, b, false).value().isApprox(plain));
  EXPECT_TRUE(nn::affine(x, w, b, true).value().isApprox(plain.cwiseMax(0.0)));
}

TEST(Tensor, SoftmaxRowsSumToOneAndSurviveLargeLogits) {
  Tensor a = Tensor::constant(mat({{1000, 1001, 999}, {-3, 0, 3}}));
  const Matrix s = nn::softmax_rows(a).value();
  for (Eigen::Index r = 0; r < 2; ++r) EXPECT_NEAR(s.row(r).sum(), 1.0, 1e-12);
  EXPECT_TRUE(s.allFinite());
  EXPECT_NEAR(s(0, 1), std::exp(1.0) / (std::exp(0.0) + std::exp(1.0) + std::exp(-1.0)), 1e-12);
}

TEST(Tensor, SegmentMaxPicksPerBlock) {
  Tensor a = Tensor::constant(mat({{1, 5}, {3, 2}, {-1, 0}, {-2, 7}}));
  EXPECT_EQ(nn::segment_max_rows(a, 2).value(), mat({{3, 5}, {-1, 7}}));
  EXPECT_THROW(nn::segment_max_rows(a, 3), ContractError);
}

TEST(Tensor, GatherScatterRoundTrip) {
  Tensor a = Tensor::constant(mat({{1}, {2}, {3}}));
  const std::vector<int> idx{2, 2, 0};
  EXPECT_EQ(nn::gather_rows(a, idx).value(), mat({{3}, {3}, {1}}));
  EXPECT_EQ(nn::scatter_add_rows(a, idx, 3).value(), mat({{3}, {0}, {3}}));
  const std::vector<int> bad{5};
  EXPECT_THROW(nn::gather_rows(a, bad), ContractError);
}

TEST(Tensor, CrossEntropyValue) {
  Tensor a = Tensor::constant(mat({{0, 0}, {std::log(3.0), 0}}));
  const std::vector<int> y{0, 0};
  // -(log 1/2 + log 3/4) / 2
  EXPECT_NEAR(nn::cross_entropy(a, y).item(), -(std::log(0.5) + std::log(0.75)) / 2, 1e-12);
}

TEST(Tensor, PerClassBceValue) {
  Tensor a = Tensor::constant(mat({{0.0, 2.0}}));
  const double s = 1 / (1 + std::exp(-2.0));
  EXPECT_NEAR(nn::per_class_bce(a, mat({{1, 0}})).item(), -(std::log(0.5) + std::log(1 - s)) / 2,
              1e-12);
  // Large logits stay finite.
  Tensor big = Tensor::constant(mat({{800.0, -800.0}}));
  EXPECT_NEAR(nn::per_class_bce(big, mat({{1, 0}})).item(), 0.0, 1e-12);
  EXPECT_NEAR(nn::per_class_bce(big, mat({{0, 1}})).item(), 800.0, 1e-9);
}

TEST(Tensor, BceProbsClampsAtEps) {
  Tensor p = Tensor::constant(mat({{0.0}, {1.0}}));
  const double v = nn::bce_probs(p, mat({{1}, {0}}), 1e-7).item();
  EXPECT_NEAR(v, -std::log(1e-7), 1e-6);
}

TEST(Tensor, GateBoundaries) {
  const double a = 2.2, b = 0.025;
  EXPECT_EQ(nn::gate_value(b, a, b), 0.0);
  EXPECT_EQ(nn::gate_value(1 / a + b, a, b), 1.0);
  EXPECT_EQ(nn::gate_value(-1.0, a, b), 0.0);
  EXPECT_EQ(nn::gate_value(2.0, a, b), 1.0);
  EXPECT_NEAR(nn::gate_value(0.3, a, b), a * 0.3 - a * b, 1e-15);
}

TEST(Tensor, FiniteChecksRaise) {
  const bool prev = nn::finite_checks();
  nn::set_finite_checks(true);
  Tensor a = Tensor::constant(mat({{std::nan("")}}));
  EXPECT_THROW(nn::scale(a, 1.0), insg::NumericError);
  nn::set_finite_checks(prev);
}

TEST(Tensor, ScalarAndItem) {
  EXPECT_DOUBLE_EQ(Tensor::scalar(2.5).item(), 2.5);
  EXPECT_THROW(Tensor::zeros(2, 1).item(), ContractError);
  EXPECT_THROW(Tensor::zeros(2, 1).backward(), ContractError);
}

class GradSuite : public ::testing::TestWithParam<std::size_t> {};

TEST_P(GradSuite, MatchesCentralDifferences) {
  const auto cases = grad_suite::cases();
  const auto& c = cases[GetParam()];
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto report = c.run(seed);
    EXPECT_LE(report.max_rel_error, c.tolerance) << c.name << " seed " << seed;
  }
}

INSTANTIATE_TEST_SUITE_P(AllOps, GradSuite,
                         ::testing::Range<std::size_t>(0, grad_suite::cases().size()),
                         [](const auto& info) { return grad_suite::cases()[info.param].name; });

}  // namespace
