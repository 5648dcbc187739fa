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

#include "hybridscope/filters.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "hybridscope/error.hpp"
#include "hybridscope/image_io.hpp"
#include "oracles.hpp"

namespace hybridscope {
namespace {

using testing::max_abs_diff;
using testing::random_image;

// Residual energy left above a fixed probe scale: the mean squared difference
// between an image and its own blur.
double high_frequency_energy(const Image& img) {
  const Image probe = lowpass(img, 1.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < img.samples().size(); ++i) {
    const double d = img.samples()[i] - probe.samples()[i];
    sum += d * d;
  }
  return sum / static_cast<double>(img.samples().size());
}

TEST(LowpassTest, ConstantImageIsFixedPoint) {
  const Image img(30, 30, 3, 0.42);
  for (BoundaryPolicy b : {BoundaryPolicy::replicate, BoundaryPolicy::reflect}) {
    const Image out = lowpass(img, 4.0, {.boundary = b});
    EXPECT_LE(max_abs_diff(out, img), 1e-12);
  }
}

TEST(LowpassTest, LargerSigmaLeavesLessHighFrequencyEnergy) {
  const Image img = random_image(64, 64, 3, 99);
  double prev = high_frequency_energy(img);
  for (double sigma : {2.0, 4.0, 7.0}) {
    const double energy = high_frequency_energy(lowpass(img, sigma));
    EXPECT_LT(energy, prev) << sigma;
    prev = energy;
  }
}

TEST(LowpassTest, ImpulseResponseIsTheGaussian) {
  Image delta(41, 41, 1, 0.0);
  delta.at(0, 20, 20) = 1.0;
  const double sigma = 2.0;
  const Image out = lowpass(delta, sigma, {.boundary = BoundaryPolicy::zero});
  const Kernel2D k = gaussian_2d(sigma);
  const int r = k.radius();
  for (int y = 0; y < 41; ++y) {
    for (int x = 0; x < 41; ++x) {
      const int u = x - 20, v = y - 20;
      const double expected =
          (std::abs(u) <= r && std::abs(v) <= r) ? k(u, v) : 0.0;
      EXPECT_NEAR(out.at(0, x, y), expected, 1e-10);
    }
  }
}

TEST(LowpassTest, DirectAndSeparableStrategiesAgree) {
  const Image img = random_image(48, 40, 3, 7);
  const Image a = lowpass(img, 3.0, {.strategy = Strategy::direct});
  const Image b = lowpass(img, 3.0, {.strategy = Strategy::separable});
  EXPECT_LE(max_abs_diff(a, b), 1e-10);
}

TEST(HighpassTest, ConstantImageHasNoResponse) {
  const Image img(40, 40, 3, 0.8);
  const SignedImage sub = highpass(img, 7.0, HighpassMode::subtract);
  for (double v : sub.samples()) EXPECT_NEAR(v, 0.0, 1e-12);
  for (Strategy s : {Strategy::direct, Strategy::separable}) {
    const SignedImage log = highpass(img, 7.0, HighpassMode::log, {.strategy = s});
    for (double v : log.samples()) EXPECT_NEAR(v, 0.0, 1e-9);
  }
}

TEST(HighpassTest, DecompositionReconstructsOriginal) {
  for (std::uint32_t seed = 0; seed < 5; ++seed) {
    const Image img = random_image(33, 27, seed % 2 ? 3 : 1, seed);
    for (double sigma : {1.0, 2.5, 7.0}) {
      const Image low = lowpass(img, sigma);
      const SignedImage high = highpass(img, sigma, HighpassMode::subtract);
      for (std::size_t i = 0; i < img.samples().size(); ++i) {
        EXPECT_NEAR(low.samples()[i] + high.samples()[i], img.samples()[i], 1e-12);
      }
    }
  }
}

TEST(HighpassTest, LogStrategiesAgree) {
  const Image img = random_image(30, 30, 1, 3);
  const SignedImage a = highpass(img, 2.0, HighpassMode::log, {.strategy = Strategy::direct});
  const SignedImage b = highpass(img, 2.0, HighpassMode::log);
  EXPECT_LE(max_abs_diff(a, b), 1e-10);
}

TEST(VisualizeTest, CentersOnMidGrayAndClamps) {
  SignedImage s(3, 1, 1);
  s.at(0, 0, 0) = 0.0;
  s.at(0, 1, 0) = -0.7;
  s.at(0, 2, 0) = 0.6;
  const Image v = visualize_signed(s);
  EXPECT_EQ(v.at(0, 0, 0), 0.5);
  EXPECT_EQ(v.at(0, 1, 0), 0.0);
  EXPECT_EQ(v.at(0, 2, 0), 1.0);
  const Image zeros = visualize_signed(SignedImage(4, 4, 3));
  for (double x : zeros.samples()) EXPECT_EQ(x, 0.5);
}

TEST(HybridTest, DegenerateWeightsReproduceSingleLayers) {
  const Image a = random_image(50, 40, 3, 1);
  const Image b = random_image(50, 40, 3, 2);
  for (HighpassMode mode : {HighpassMode::subtract, HighpassMode::log}) {
    BlendSpec spec{.sigma_low = 3.0, .sigma_high = 2.0, .weight = 1.0,
                   .highpass_mode = mode};
    EXPECT_EQ(hybrid(a, b, spec), lowpass(a, 3.0));
    spec.weight = 0.0;
    EXPECT_EQ(hybrid(a, b, spec), visualize_signed(highpass(b, 2.0, mode)));
  }
}

TEST(HybridTest, ConstantSourcesBlendToKnownValue) {
  for (double c : {0.0, 0.3, 1.0}) {
    const Image img(64, 64, 1, c);
    const Image out = hybrid(img, img, BlendSpec{});
    const double expected = std::clamp(0.5 * c + 0.5 * 0.5, 0.0, 1.0);
    for (double v : out.samples()) EXPECT_NEAR(v, expected, 1e-12);
  }
}

TEST(HybridTest, OutputInRangeAndMonotoneInWeight) {
  const Image a = random_image(32, 32, 3, 10);
  const Image b = random_image(32, 32, 3, 11);
  BlendSpec spec{.sigma_low = 2.0, .sigma_high = 1.0};
  const HybridLayers layers = hybrid_layers(a, b, spec);
  Image prev = blend_layers(layers, 0.0);
  for (double w = 0.1; w <= 1.0001; w += 0.1) {
    const Image cur = blend_layers(layers, std::min(w, 1.0));
    for (std::size_t i = 0; i < cur.samples().size(); ++i) {
      const double v = cur.samples()[i];
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
      const double low = layers.low.samples()[i];
      const double p = prev.samples()[i];
      if (v > 0.0 && v < 1.0 && p > 0.0 && p < 1.0) {
        // Moving toward the lowpass layer never increases the distance.
        EXPECT_LE(std::abs(v - low), std::abs(p - low) + 1e-12);
      }
    }
    prev = cur;
  }
}

TEST(HybridTest, DeterministicAcrossRunsAndThreads) {
  const Image a = random_image(40, 30, 3, 4);
  const Image b = random_image(40, 30, 3, 5);
  const BlendSpec spec{.sigma_low = 4.0, .sigma_high = 3.0, .weight = 0.65};
  const Image first = hybrid(a, b, spec);
  EXPECT_EQ(hybrid(a, b, spec), first);
  EXPECT_EQ(hybrid(a, b, spec, {4}), first);
}

TEST(HybridTest, RejectsShapeMismatchAndBadSpec) {
  const Image a(20, 20, 3), b(21, 20, 3);
  try {
    hybrid(a, b, BlendSpec{.sigma_low = 1, .sigma_high = 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::dimension_mismatch);
    EXPECT_NE(std::string(e.what()).find("match_dimensions"), std::string::npos);
  }
  EXPECT_THROW(hybrid(a, a, BlendSpec{.sigma_low = 1, .weight = 1.5}), Error);
  EXPECT_THROW(hybrid(a, a, BlendSpec{.sigma_low = 0}), Error);
}

TEST(MatchDimensionsTest, ShrinksToPerAxisMinimum) {
  const Image big(1577, 894, 1, 0.25), small(991, 721, 1, 0.75);
  const auto [a, b] = match_dimensions(big, small);
  EXPECT_EQ(a.extent(), (Extent{991, 721}));
  EXPECT_EQ(b.extent(), (Extent{991, 721}));
  EXPECT_EQ(b, small);

  const auto [c, d] = match_dimensions(Image(100, 50, 3), Image(50, 100, 3));
  EXPECT_EQ(c.extent(), (Extent{50, 50}));
  EXPECT_EQ(d.extent(), (Extent{50, 50}));
}

TEST(MatchDimensionsTest, IdenticalSizesPassThroughBitwise) {
  const Image a = random_image(17, 13, 3, 1), b = random_image(17, 13, 3, 2);
  const auto [x, y] = match_dimensions(a, b);
  EXPECT_EQ(x, a);
  EXPECT_EQ(y, b);
}

TEST(MatchDimensionsTest, NeverGrowsAndRejectsChannelMismatch) {
  std::mt19937 gen(8);
  std::uniform_int_distribution<int> dim(1, 60);
  for (int t = 0; t < 25; ++t) {
    const Image a(dim(gen), dim(gen), 1), b(dim(gen), dim(gen), 1);
    const auto [x, y] = match_dimensions(a, b);
    EXPECT_LE(x.plane_size(), a.plane_size());
    EXPECT_LE(y.plane_size(), b.plane_size());
    EXPECT_EQ(x.extent(), y.extent());
  }
  try {
    match_dimensions(Image(4, 4, 1), Image(4, 4, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::channel_mismatch);
  }
}

TEST(PyramidTest, SingleLevelIsTheImage) {
  const Image img = random_image(20, 10, 3, 6);
  const Pyramid p = scale_pyramid(img, {.levels = 1});
  EXPECT_EQ(p.strip, img);
  EXPECT_EQ(p.levels.size(), 1u);
}

TEST(PyramidTest, GeometricLevelsBottomAligned) {
  const Image img(64, 64, 1, 0.2);
  const Pyramid p = scale_pyramid(img, {.levels = 3, .scale_factor = 0.5, .gap_px = 4});
  ASSERT_EQ(p.levels.size(), 3u);
  EXPECT_EQ(p.levels[0], (Extent{64, 64}));
  EXPECT_EQ(p.levels[1], (Extent{32, 32}));
  EXPECT_EQ(p.levels[2], (Extent{16, 16}));
  EXPECT_EQ(p.strip.width(), 64 + 32 + 16 + 2 * 4);
  EXPECT_EQ(p.strip.height(), 64);
  EXPECT_EQ(p.offsets, (std::vector<int>{0, 68, 104}));
  // Gap and the area above the smaller levels stay white.
  EXPECT_EQ(p.strip.at(0, 65, 10), 1.0);
  EXPECT_EQ(p.strip.at(0, 70, 0), 1.0);
  EXPECT_EQ(p.strip.at(0, 70, 63), 0.2);
  EXPECT_EQ(p.strip.at(0, 110, 48), 0.2);
  EXPECT_EQ(p.strip.at(0, 110, 47), 1.0);
}

TEST(PyramidTest, StopsEarlyWhenLevelsVanish) {
  const Image img(4, 4, 3, 0.5);
  const Pyramid p = scale_pyramid(img, {.levels = 6, .scale_factor = 0.5, .gap_px = 1});
  ASSERT_EQ(p.levels.size(), 3u);  // 4, 2, 1
  EXPECT_EQ(p.strip.width(), 4 + 2 + 1 + 2);
  EXPECT_THROW(scale_pyramid(img, {.levels = 0}), Error);
  EXPECT_THROW(scale_pyramid(img, {.levels = 2, .scale_factor = 1.0}), Error);
}

}  // namespace
}  // namespace hybridscope
