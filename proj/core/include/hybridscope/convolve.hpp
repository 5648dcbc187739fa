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

#ifndef HYBRIDSCOPE_CONVOLVE_HPP_
#define HYBRIDSCOPE_CONVOLVE_HPP_

#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "hybridscope/image.hpp"
#include "hybridscope/kernels.hpp"

namespace hybridscope {

/// How samples outside the image are synthesized.
enum class BoundaryPolicy {
  replicate,  // clamp to the nearest edge sample
  reflect,    // half-sample mirror: -1 -> 0, -2 -> 1, n -> n-1
  zero,       // contribute nothing
};

std::string_view to_string(BoundaryPolicy b);
std::optional<BoundaryPolicy> parse_boundary(std::string_view name);

struct Point {
  int x = 0;
  int y = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Maps a possibly out-of-range index onto [0, n). Returns -1 when the
/// policy is `zero` and the index is outside.
int resolve_index(int i, int n, BoundaryPolicy b);

/// 2-D form of resolve_index; std::nullopt means "contributes 0".
std::optional<Point> resolve(Point p, BoundaryPolicy b, Extent bounds);

/// Counts tap multiplications performed by the engine. Only populated when
/// the library is built with HYBRIDSCOPE_OP_COUNTERS.
struct OpCounter {
  std::atomic<std::uint64_t> tap_multiplies{0};
};

bool op_counters_enabled() noexcept;

struct ConvolveOptions {
  /// Worker threads for row-parallel passes; 0 picks hardware concurrency.
  /// Results are bit-identical for every thread count.
  unsigned threads = 1;
  OpCounter* counter = nullptr;
};

/// Same-size 2-D convolution, out(p) = sum_{u,v} in(p - (u,v)) * k(u,v),
/// applied to each channel independently. Throws Errc::kernel_too_large
/// when the kernel is wider than 2 * min(width, height) + 1.
SignedImage convolve2d(const PlaneView& img, const Kernel2D& k,
                       BoundaryPolicy b = BoundaryPolicy::replicate,
                       const ConvolveOptions& options = {});

/// Horizontal pass with `horizontal`, then vertical pass with `vertical`.
SignedImage convolve_separable(const PlaneView& img,
                               std::span<const double> horizontal,
                               std::span<const double> vertical,
                               BoundaryPolicy b = BoundaryPolicy::replicate,
                               const ConvolveOptions& options = {});

/// Separable convolution with the outer product k x k.
inline SignedImage convolve_separable(
    const PlaneView& img, const Kernel1D& k,
    BoundaryPolicy b = BoundaryPolicy::replicate,
    const ConvolveOptions& options = {}) {
  return convolve_separable(img, k.taps(), k.taps(), b, options);
}

/// Sum of separable convolutions, one per term.
SignedImage convolve_terms(const PlaneView& img,
                           std::span<const SeparableTerm> terms,
                           BoundaryPolicy b = BoundaryPolicy::replicate,
                           const ConvolveOptions& options = {});

template <class Tag>
SignedImage convolve2d(const BasicImage<Tag>& img, const Kernel2D& k,
                       BoundaryPolicy b = BoundaryPolicy::replicate,
                       const ConvolveOptions& options = {}) {
  return convolve2d(img.view(), k, b, options);
}

template <class Tag>
SignedImage convolve_separable(const BasicImage<Tag>& img, const Kernel1D& k,
                               BoundaryPolicy b = BoundaryPolicy::replicate,
                               const ConvolveOptions& options = {}) {
  return convolve_separable(img.view(), k, b, options);
}

template <class Tag>
SignedImage convolve_terms(const BasicImage<Tag>& img,
                           std::span<const SeparableTerm> terms,
                           BoundaryPolicy b = BoundaryPolicy::replicate,
                           const ConvolveOptions& options = {}) {
  return convolve_terms(img.view(), terms, b, options);
}

}  // namespace hybridscope

#endif  // HYBRIDSCOPE_CONVOLVE_HPP_
