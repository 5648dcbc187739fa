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

#ifndef HYBRIDSCOPE_KERNELS_HPP_
#define HYBRIDSCOPE_KERNELS_HPP_

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace hybridscope {

enum class KernelKind { gaussian, log, binomial3, custom };

std::string_view to_string(KernelKind kind);

/// Odd-length symmetric 1-D filter. Taps are indexed by offset in
/// [-radius, radius].
class Kernel1D {
 public:
  /// Wraps arbitrary taps (odd length) as a custom kernel.
  static Kernel1D from_taps(std::vector<double> taps);

  double sigma() const noexcept { return sigma_; }
  KernelKind kind() const noexcept { return kind_; }
  int size() const noexcept { return static_cast<int>(taps_.size()); }
  int radius() const noexcept { return size() / 2; }
  std::span<const double> taps() const noexcept { return taps_; }
  double operator()(int offset) const { return taps_[offset + radius()]; }

 private:
  friend Kernel1D gaussian_1d(double sigma);
  Kernel1D(double sigma, KernelKind kind, std::vector<double> taps)
      : sigma_(sigma), kind_(kind), taps_(std::move(taps)) {}

  double sigma_ = 0.0;
  KernelKind kind_ = KernelKind::custom;
  std::vector<double> taps_;
};

/// Square S x S filter stored row-major; `(u, v)` are horizontal and
/// vertical offsets from the center tap.
class Kernel2D {
 public:
  static Kernel2D from_taps(int size, std::vector<double> taps);

  double sigma() const noexcept { return sigma_; }
  KernelKind kind() const noexcept { return kind_; }
  int size() const noexcept { return size_; }
  int radius() const noexcept { return size_ / 2; }
  std::span<const double> taps() const noexcept { return taps_; }
  double operator()(int u, int v) const {
    return taps_[static_cast<std::size_t>(v + radius()) * size_ + u + radius()];
  }
  double sum() const;

 private:
  friend Kernel2D gaussian_2d(double sigma);
  friend Kernel2D binomial3();
  friend Kernel2D log_2d_uncorrected(double sigma);
  friend Kernel2D log_2d(double sigma);
  Kernel2D(double sigma, KernelKind kind, int size, std::vector<double> taps)
      : sigma_(sigma), kind_(kind), size_(size), taps_(std::move(taps)) {}

  double sigma_ = 0.0;
  KernelKind kind_ = KernelKind::custom;
  int size_ = 0;
  std::vector<double> taps_;
};

/// Support width for a given sigma: round(4 * sigma) + 1, bumped to the next
/// odd number and never below 3. Throws Errc::invalid_parameter for
/// non-positive, non-finite or absurdly large sigma.
int size_rule(double sigma);

/// Point-sampled Gaussian, normalized to unit sum.
Kernel1D gaussian_1d(double sigma);

/// Point-sampled isotropic Gaussian, normalized to unit sum.
Kernel2D gaussian_2d(double sigma);

/// The classic 3x3 binomial smoothing mask [[1,2,1],[2,4,2],[1,2,1]] / 16.
Kernel2D binomial3();

/// Closed-form Laplacian of Gaussian without its normalizing coefficient:
/// ((x^2 + y^2 - 2 sigma^2) / sigma^4) * exp(-(x^2 + y^2) / (2 sigma^2)).
double log_response(double x, double y, double sigma);

/// LoG samples on the integer grid, before any DC correction.
Kernel2D log_2d_uncorrected(double sigma);

/// LoG samples with their mean subtracted so the taps sum to zero.
Kernel2D log_2d(double sigma);

/// One rank-1 component of a 2-D kernel: k(u, v) = horizontal(u) * vertical(v).
struct SeparableTerm {
  std::vector<double> horizontal;
  std::vector<double> vertical;
};

/// Expresses log_2d(sigma) as a sum of three rank-1 terms:
/// d2g(x) g(y) + g(x) d2g(y) - mean * 1(x) 1(y).
std::vector<SeparableTerm> log_2d_separable(double sigma);

}  // namespace hybridscope

#endif  // HYBRIDSCOPE_KERNELS_HPP_
