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

#ifndef HYBRIDSCOPE_IMAGE_HPP_
#define HYBRIDSCOPE_IMAGE_HPP_

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hybridscope/error.hpp"

namespace hybridscope {

struct Extent {
  int width = 0;
  int height = 0;

  friend bool operator==(const Extent&, const Extent&) = default;
};

/// Read-only planar view shared by the convolution engine.
struct PlaneView {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::span<const double> samples;

  std::span<const double> plane(int c) const {
    const std::size_t n = static_cast<std::size_t>(width) * height;
    return samples.subspan(static_cast<std::size_t>(c) * n, n);
  }
};

struct UnitRangeTag {};
struct SignedTag {};

/// Planar raster of 1 (gray) or 3 (RGB) channels stored as doubles.
///
/// `Image` holds displayable intensities nominally in [0, 1]; `SignedImage`
/// carries unrestricted intermediates such as high-pass residuals. The range
/// of an `Image` is not checked on every write; encoders reject values
/// outside [0, 1].
template <class Tag>
class BasicImage {
 public:
  BasicImage() = default;

  BasicImage(int width, int height, int channels, double fill = 0.0)
      : width_(width), height_(height), channels_(channels) {
    if (width < 1 || height < 1) {
      throw Error(Errc::invalid_parameter,
                  "image dimensions must be positive, got " +
                      std::to_string(width) + "x" + std::to_string(height));
    }
    if (channels != 1 && channels != 3) {
      throw Error(Errc::invalid_parameter,
                  "image must have 1 or 3 channels, got " +
                      std::to_string(channels));
    }
    data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  Extent extent() const noexcept { return {width_, height_}; }
  bool empty() const noexcept { return data_.empty(); }

  std::size_t plane_size() const noexcept {
    return static_cast<std::size_t>(width_) * height_;
  }

  std::span<double> plane(int c) & {
    return std::span<double>(data_).subspan(c * plane_size(), plane_size());
  }
  std::span<const double> plane(int c) const& {
    return std::span<const double>(data_).subspan(c * plane_size(),
                                                  plane_size());
  }
  std::span<const double> plane(int c) && = delete;

  double& at(int c, int x, int y) {
    return data_[c * plane_size() + static_cast<std::size_t>(y) * width_ + x];
  }
  double at(int c, int x, int y) const {
    return data_[c * plane_size() + static_cast<std::size_t>(y) * width_ + x];
  }

  std::span<double> samples() & noexcept { return data_; }
  std::span<const double> samples() const& noexcept { return data_; }
  std::span<const double> samples() && = delete;

  PlaneView view() const& noexcept {
    return {width_, height_, channels_, data_};
  }
  PlaneView view() && = delete;

  template <class OtherTag>
  bool same_shape(const BasicImage<OtherTag>& other) const noexcept {
    return width_ == other.width() && height_ == other.height() &&
           channels_ == other.channels();
  }

  friend bool operator==(const BasicImage&, const BasicImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

using Image = BasicImage<UnitRangeTag>;
using SignedImage = BasicImage<SignedTag>;

/// Copies the samples of `src` into a raster with a different tag.
template <class To, class FromTag>
To retag(const BasicImage<FromTag>& src) {
  To out(src.width(), src.height(), src.channels());
  auto in = src.samples();
  std::copy(in.begin(), in.end(), out.samples().begin());
  return out;
}

inline SignedImage to_signed(const Image& img) { return retag<SignedImage>(img); }

/// Clamps every sample into [0, 1].
Image clamp_to_unit(const SignedImage& img);

}  // namespace hybridscope

#endif  // HYBRIDSCOPE_IMAGE_HPP_
