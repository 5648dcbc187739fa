// Copyright 2026 The Hybridscope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hybridscope/kernels.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "hybridscope/error.hpp"
#include "oracles.hpp"

namespace hybridscope {
namespace {

std::vector<double> random_sigmas(int count, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(0.3, 12.0);
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(dist(gen));
  return out;
}

void expect_invalid(double sigma) {
  try {
    size_rule(sigma);
    FAIL() << "accepted sigma " << sigma;
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::invalid_parameter);
  }
}

TEST(SizeRuleTest, MatchesFourSigmaPlusOneAtIntegers) {
  EXPECT_EQ(size_rule(7), 29);
  EXPECT_EQ(size_rule(2), 9);
  EXPECT_EQ(size_rule(30), 121);
}

TEST(SizeRuleTest, FractionalSigmaStaysOddWithFloor) {
  EXPECT_EQ(size_rule(0.6), 3);  // round(2.4) + 1
  EXPECT_EQ(size_rule(0.1), 3);  // floor
  EXPECT_EQ(size_rule(1.3), 7);  // round(5.2) + 1 = 6, bumped
}

TEST(SizeRuleTest, RejectsBadSigma) {
  expect_invalid(0.0);
  expect_invalid(-1.0);
  expect_invalid(std::numeric_limits<double>::quiet_NaN());
  expect_invalid(std::numeric_limits<double>::infinity());
  EXPECT_THROW(gaussian_1d(0.0), Error);
  EXPECT_THROW(log_2d(-3.0), Error);
}

TEST(SizeRuleTest, MonotoneAndOdd) {
  int prev = 0;
  for (double s = 0.05; s < 40.0; s += 0.05) {
    const int size = size_rule(s);
    EXPECT_GE(size, prev) << s;
    EXPECT_EQ(size % 2, 1) << s;
    EXPECT_GE(size, 3);
    prev = size;
  }
}

TEST(Gaussian1DTest, NormalizedSymmetricUnimodal) {
  for (double sigma : random_sigmas(50, 11)) {
    const Kernel1D k = gaussian_1d(sigma);
    ASSERT_EQ(k.size(), size_rule(sigma));
    double sum = 0.0;
    for (double t : k.taps()) {
      EXPECT_GT(t, 0.0);
      sum += t;
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
    for (int u = 0; u <= k.radius(); ++u) {
      EXPECT_EQ(k(u), k(-u));
      if (u > 0) EXPECT_LE(k(u), k(u - 1));
    }
    EXPECT_EQ(k.kind(), KernelKind::gaussian);
  }
}

TEST(Gaussian1DTest, CenterToNeighborRatioAtUnitSigma) {
  const Kernel1D k = gaussian_1d(1.0);
  EXPECT_NEAR(k(0) / k(1), std::exp(0.5), 1e-9);
  EXPECT_EQ(gaussian_1d(2.0).size(), 9);
}

TEST(Gaussian2DTest, EqualsOuterProductOfOneDimensional) {
  std::vector<double> sigmas = {2.0, 0.6, 7.0, 30.0};
  for (double s : random_sigmas(20, 5)) sigmas.push_back(s);
  for (double sigma : sigmas) {
    const Kernel1D g1 = gaussian_1d(sigma);
    const Kernel2D g2 = gaussian_2d(sigma);
    ASSERT_EQ(g2.size(), g1.size());
    const int r = g2.radius();
    double worst = 0.0;
    for (int v = -r; v <= r; ++v) {
      for (int u = -r; u <= r; ++u) {
        worst = std::max(worst, std::abs(g2(u, v) - g1(u) * g1(v)));
      }
    }
    EXPECT_LE(worst, 1e-12) << sigma;
    EXPECT_NEAR(g2.sum(), 1.0, 1e-9);
  }
}

TEST(Gaussian2DTest, MatchesLonghandSampling) {
  const Kernel2D g = gaussian_2d(3.0);
  const auto ref = testing::oracle_gaussian_2d(3.0, 13);
  ASSERT_EQ(g.size(), 13);
  EXPECT_LE(testing::max_abs_diff(g.taps(), ref), 1e-15);
}

TEST(Gaussian2DTest, RadiallyMonotoneAtSigmaFive) {
  const Kernel2D g = gaussian_2d(5.0);
  const int r = g.radius();
  const int rays[][2] = {{1, 0}, {0, 1}, {1, 1}, {-1, 1}, {2, 1}, {1, -2}};
  for (const auto& ray : rays) {
    double prev = g(0, 0);
    for (int step = 1;; ++step) {
      const int u = ray[0] * step, v = ray[1] * step;
      if (std::abs(u) > r || std::abs(v) > r) break;
      EXPECT_LT(g(u, v), prev);
      prev = g(u, v);
    }
  }
}

void expect_fourfold_symmetry(const Kernel2D& k) {
  const int r = k.radius();
  for (int v = -r; v <= r; ++v) {
    for (int u = -r; u <= r; ++u) {
      EXPECT_EQ(k(u, v), k(-u, v));
      EXPECT_EQ(k(u, v), k(u, -v));
      EXPECT_EQ(k(u, v), k(v, u));
    }
  }
}

TEST(Gaussian2DTest, FourfoldSymmetryIsBitwise) {
  for (double sigma : random_sigmas(10, 3)) {
    expect_fourfold_symmetry(gaussian_2d(sigma));
    expect_fourfold_symmetry(log_2d(sigma));
  }
  EXPECT_EQ(gaussian_2d(2.0)(1, 2), gaussian_2d(2.0)(2, 1));
}

TEST(Binomial3Test, IsTheSixteenthMask) {
  const Kernel2D k = binomial3();
  const std::vector<double> expected = {1 / 16.0, 2 / 16.0, 1 / 16.0,
                                        2 / 16.0, 4 / 16.0, 2 / 16.0,
                                        1 / 16.0, 2 / 16.0, 1 / 16.0};
  ASSERT_EQ(k.size(), 3);
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(k.taps()[i], expected[i]);
  }
  EXPECT_EQ(k(0, 0), 0.25);
  EXPECT_EQ(k.sum(), 1.0);
  EXPECT_EQ(k.kind(), KernelKind::binomial3);
}

TEST(LogTest, ClosedFormCenterAndZeroRing) {
  for (double sigma : {0.6, 1.0, 2.0, 4.0, 7.0, 10.0, 30.0}) {
    const Kernel2D raw = log_2d_uncorrected(sigma);
    EXPECT_NEAR(raw(0, 0), -2.0 / (sigma * sigma), 1e-9);
  }
  // x^2 + y^2 == 2 sigma^2 on integer points.
  EXPECT_EQ(log_2d_uncorrected(1.0)(1, 1), 0.0);
  const Kernel2D five = log_2d_uncorrected(5.0);
  EXPECT_EQ(five(5, 5), 0.0);
  EXPECT_EQ(five(7, 1), 0.0);
  EXPECT_EQ(five(-1, 7), 0.0);
}

TEST(LogTest, ZeroSumAndCenterMinimum) {
  std::vector<double> sigmas = {0.6, 2, 4, 7, 10, 30};
  for (double s : random_sigmas(20, 9)) sigmas.push_back(s);
  for (double sigma : sigmas) {
    const Kernel2D k = log_2d(sigma);
    EXPECT_NEAR(k.sum(), 0.0, 1e-9) << sigma;
    const double center = k(0, 0);
    for (double t : k.taps()) EXPECT_GE(t, center);
    EXPECT_EQ(k.kind(), KernelKind::log);
  }
  EXPECT_EQ(log_2d(2.0)(1, 2), log_2d(2.0)(2, 1));
}

TEST(LogTest, SeparableTermsReassembleKernel) {
  for (double sigma : {0.6, 2.0, 5.5, 9.0}) {
    const Kernel2D k = log_2d(sigma);
    const auto terms = log_2d_separable(sigma);
    ASSERT_EQ(terms.size(), 3u);
    const int r = k.radius();
    double worst = 0.0;
    for (int v = -r; v <= r; ++v) {
      for (int u = -r; u <= r; ++u) {
        double sum = 0.0;
        for (const auto& t : terms) sum += t.horizontal[u + r] * t.vertical[v + r];
        worst = std::max(worst, std::abs(sum - k(u, v)));
      }
    }
    EXPECT_LE(worst, 1e-12) << sigma;
  }
}

TEST(KernelTest, CustomTapsValidateShape) {
  EXPECT_THROW(Kernel1D::from_taps({1.0, 2.0}), Error);
  EXPECT_THROW(Kernel2D::from_taps(3, {1.0}), Error);
  EXPECT_EQ(Kernel2D::from_taps(1, {1.0}).kind(), KernelKind::custom);
}

}  // namespace
}  // namespace hybridscope
