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

#include <algorithm>
#include <cmath>
#include <future>
#include <string>

#include "hybridscope/error.hpp"
#include "hybridscope/image_io.hpp"
#include "hybridscope/kernels.hpp"

namespace hybridscope {
namespace {

void require_positive_sigma(double sigma, const char* name) {
  if (!std::isfinite(sigma) || sigma <= 0.0) {
    throw Error(Errc::invalid_parameter,
                std::string(name) + " must be positive, got " +
                    std::to_string(sigma));
  }
}

}  // namespace

std::string_view to_string(HighpassMode m) {
  return m == HighpassMode::subtract ? "subtract" : "log";
}

std::string_view to_string(Strategy s) {
  return s == Strategy::direct ? "direct" : "separable";
}

std::optional<HighpassMode> parse_highpass_mode(std::string_view name) {
  if (name == "subtract") return HighpassMode::subtract;
  if (name == "log") return HighpassMode::log;
  return std::nullopt;
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  if (name == "direct") return Strategy::direct;
  if (name == "separable") return Strategy::separable;
  return std::nullopt;
}

Image lowpass(const Image& img, double sigma, const FilterOptions& options) {
  const SignedImage blurred =
      options.strategy == Strategy::direct
          ? convolve2d(img, gaussian_2d(sigma), options.boundary,
                       options.convolve)
          : convolve_separable(img, gaussian_1d(sigma), options.boundary,
                               options.convolve);
  return clamp_to_unit(blurred);
}

namespace {

constexpr double kResidualFloor = 1e-12;

SignedImage snap_noise(SignedImage s) {
  for (double& v : s.samples()) {
    if (std::abs(v) < kResidualFloor) v = 0.0;
  }
  return s;
}

}  // namespace

SignedImage highpass(const Image& img, double sigma, HighpassMode mode,
                     const FilterOptions& options) {
  if (mode == HighpassMode::log) {
    if (options.strategy == Strategy::direct) {
      return snap_noise(
          convolve2d(img, log_2d(sigma), options.boundary, options.convolve));
    }
    const auto terms = log_2d_separable(sigma);
    return snap_noise(
        convolve_terms(img, terms, options.boundary, options.convolve));
  }
  const Image low = lowpass(img, sigma, options);
  SignedImage out(img.width(), img.height(), img.channels());
  auto src = img.samples();
  auto lo = low.samples();
  auto dst = out.samples();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i] - lo[i];
  return snap_noise(std::move(out));
}

Image visualize_signed(const SignedImage& s) {
  Image out(s.width(), s.height(), s.channels());
  auto src = s.samples();
  auto dst = out.samples();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = std::clamp(src[i] + 0.5, 0.0, 1.0);
  }
  return out;
}

void BlendSpec::validate() const {
  require_positive_sigma(sigma_low, "sigma_low");
  require_positive_sigma(sigma_high, "sigma_high");
  if (!(weight >= 0.0 && weight <= 1.0)) {
    throw Error(Errc::invalid_parameter,
                "weight must lie in [0, 1], got " + std::to_string(weight));
  }
}

HybridLayers hybrid_layers(const Image& low_src, const Image& high_src,
                           const BlendSpec& spec,
                           const ConvolveOptions& options) {
  spec.validate();
  if (!low_src.same_shape(high_src)) {
    throw Error(Errc::dimension_mismatch,
                "hybrid inputs differ in shape (" +
                    std::to_string(low_src.width()) + "x" +
                    std::to_string(low_src.height()) + "x" +
                    std::to_string(low_src.channels()) + " vs " +
                    std::to_string(high_src.width()) + "x" +
                    std::to_string(high_src.height()) + "x" +
                    std::to_string(high_src.channels()) +
                    "); run match_dimensions first");
  }
  const FilterOptions filter{spec.boundary, Strategy::separable, options};
  if (options.threads == 1) {
    return {lowpass(low_src, spec.sigma_low, filter),
            highpass(high_src, spec.sigma_high, spec.highpass_mode, filter)};
  }
  auto high = std::async(std::launch::async, [&] {
    return highpass(high_src, spec.sigma_high, spec.highpass_mode, filter);
  });
  Image low = lowpass(low_src, spec.sigma_low, filter);
  return {std::move(low), high.get()};
}

Image blend_layers(const HybridLayers& layers, double weight) {
  if (!layers.low.same_shape(layers.high)) {
    throw Error(Errc::dimension_mismatch, "layer shapes differ");
  }
  Image out(layers.low.width(), layers.low.height(), layers.low.channels());
  auto lo = layers.low.samples();
  auto hi = layers.high.samples();
  auto dst = out.samples();
  const double rest = 1.0 - weight;
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const double value = weight * lo[i] + rest * (hi[i] + 0.5);
    dst[i] = std::clamp(value, 0.0, 1.0);
  }
  return out;
}

Image hybrid(const Image& low_src, const Image& high_src, const BlendSpec& spec,
             const ConvolveOptions& options) {
  return blend_layers(hybrid_layers(low_src, high_src, spec, options),
                      spec.weight);
}

std::pair<Image, Image> match_dimensions(const Image& a, const Image& b) {
  if (a.empty() || b.empty()) {
    throw Error(Errc::invalid_parameter, "match_dimensions needs two images");
  }
  if (a.channels() != b.channels()) {
    throw Error(Errc::channel_mismatch,
                "images have " + std::to_string(a.channels()) + " and " +
                    std::to_string(b.channels()) + " channels");
  }
  const int w = std::min(a.width(), b.width());
  const int h = std::min(a.height(), b.height());
  return {resize_bilinear(a, w, h), resize_bilinear(b, w, h)};
}

void PyramidSpec::validate() const {
  if (levels < 1) {
    throw Error(Errc::invalid_parameter, "pyramid levels must be at least 1");
  }
  if (!(scale_factor > 0.0 && scale_factor < 1.0)) {
    throw Error(Errc::invalid_parameter,
                "pyramid scale factor must lie in (0, 1)");
  }
  if (gap_px < 0) {
    throw Error(Errc::invalid_parameter, "pyramid gap must be non-negative");
  }
}

Pyramid scale_pyramid(const Image& img, const PyramidSpec& spec) {
  spec.validate();
  Pyramid result;
  result.levels.push_back(img.extent());
  for (int i = 1; i < spec.levels; ++i) {
    const Extent prev = result.levels.back();
    const double w = std::floor(prev.width * spec.scale_factor);
    const double h = std::floor(prev.height * spec.scale_factor);
    if (w < 1 || h < 1) break;
    result.levels.push_back({static_cast<int>(w), static_cast<int>(h)});
  }

  int total_width = 0;
  for (const Extent& e : result.levels) {
    result.offsets.push_back(total_width);
    total_width += e.width + spec.gap_px;
  }
  total_width -= spec.gap_px;

  result.strip = Image(total_width, img.height(), img.channels(), 1.0);
  for (std::size_t i = 0; i < result.levels.size(); ++i) {
    const Extent e = result.levels[i];
    const Image level = resize_bilinear(img, e.width, e.height);
    const int x0 = result.offsets[i];
    const int y0 = img.height() - e.height;
    for (int c = 0; c < img.channels(); ++c) {
      for (int y = 0; y < e.height; ++y) {
        for (int x = 0; x < e.width; ++x) {
          result.strip.at(c, x0 + x, y0 + y) = level.at(c, x, y);
        }
      }
    }
  }
  return result;
}

}  // namespace hybridscope
