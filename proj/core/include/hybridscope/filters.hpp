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

#ifndef HYBRIDSCOPE_FILTERS_HPP_
#define HYBRIDSCOPE_FILTERS_HPP_

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "hybridscope/convolve.hpp"
#include "hybridscope/image.hpp"

namespace hybridscope {

enum class HighpassMode { subtract, log };

/// Direct runs the full 2-D kernel; separable runs 1-D passes (a sum of
/// three rank-1 passes for LoG).
enum class Strategy { direct, separable };

std::string_view to_string(HighpassMode m);
std::string_view to_string(Strategy s);
std::optional<HighpassMode> parse_highpass_mode(std::string_view name);
std::optional<Strategy> parse_strategy(std::string_view name);

struct FilterOptions {
  BoundaryPolicy boundary = BoundaryPolicy::replicate;
  Strategy strategy = Strategy::separable;
  ConvolveOptions convolve = {};
};

/// Gaussian blur clamped back into [0, 1].
Image lowpass(const Image& img, double sigma, const FilterOptions& options = {});

/// `subtract`: img - lowpass(img, sigma). `log`: img convolved with log_2d.
SignedImage highpass(const Image& img, double sigma, HighpassMode mode,
                     const FilterOptions& options = {});

/// Maps a signed response to a displayable image: clamp(s + 0.5).
Image visualize_signed(const SignedImage& s);

struct BlendSpec {
  double sigma_low = 7.0;
  double sigma_high = 7.0;
  /// Fraction of the lowpass layer in the blend.
  double weight = 0.5;
  HighpassMode highpass_mode = HighpassMode::subtract;
  BoundaryPolicy boundary = BoundaryPolicy::replicate;

  /// Throws Errc::invalid_parameter naming the offending field.
  void validate() const;
};

struct HybridLayers {
  Image low;
  SignedImage high;
};

/// Computes both filtered layers; with threads != 1 they run concurrently.
HybridLayers hybrid_layers(const Image& low_src, const Image& high_src,
                           const BlendSpec& spec,
                           const ConvolveOptions& options = {});

/// clamp(weight * low + (1 - weight) * (high + 0.5)).
Image blend_layers(const HybridLayers& layers, double weight);

/// Hybrid image of the low frequencies of `low_src` and the high frequencies
/// of `high_src`. Both inputs must share dimensions and channel count.
Image hybrid(const Image& low_src, const Image& high_src, const BlendSpec& spec,
             const ConvolveOptions& options = {});

/// Shrinks whichever image is larger on an axis to the per-axis minimum.
std::pair<Image, Image> match_dimensions(const Image& a, const Image& b);

struct PyramidSpec {
  int levels = 3;
  double scale_factor = 0.5;
  int gap_px = 8;

  void validate() const;
};

struct Pyramid {
  Image strip;
  /// Size of each emitted level, largest first.
  std::vector<Extent> levels;
  /// Left edge of each level inside the strip.
  std::vector<int> offsets;
};

/// Lays out successively shrunk copies left to right, bottom-aligned, on a
/// white background. Stops early once a level would be smaller than 1x1.
Pyramid scale_pyramid(const Image& img, const PyramidSpec& spec);

}  // namespace hybridscope

#endif  // HYBRIDSCOPE_FILTERS_HPP_
