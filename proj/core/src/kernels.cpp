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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hybridscope/error.hpp"

namespace hybridscope {
namespace {

// Larger sigmas would overflow the support computation long before any
// image could accommodate the kernel.
constexpr double kMaxSigma = 1.0e6;

void check_sigma(double sigma) {
  if (!std::isfinite(sigma) || sigma <= 0.0 || sigma > kMaxSigma) {
    throw Error(Errc::invalid_parameter,
                "sigma must be a finite value in (0, 1e6], got " +
                    std::to_string(sigma));
  }
}

// Fills an S x S grid from a function of (max(|u|,|v|), min(|u|,|v|)) so the
// four reflections and the transpose are bitwise identical.
template <class F>
std::vector<double> mirrored_grid(int size, F&& octant_value) {
  const int r = size / 2;
  std::vector<double> octant(static_cast<std::size_t>(r + 1) * (r + 1));
  for (int a = 0; a <= r; ++a) {
    for (int b = 0; b <= a; ++b) {
      octant[static_cast<std::size_t>(a) * (r + 1) + b] = octant_value(a, b);
    }
  }
  std::vector<double> taps(static_cast<std::size_t>(size) * size);
  for (int v = -r; v <= r; ++v) {
    for (int u = -r; u <= r; ++u) {
      const int a = std::max(std::abs(u), std::abs(v));
      const int b = std::min(std::abs(u), std::abs(v));
      taps[static_cast<std::size_t>(v + r) * size + (u + r)] =
          octant[static_cast<std::size_t>(a) * (r + 1) + b];
    }
  }
  return taps;
}

double sum_of(std::span<const double> values) {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

}  // namespace

std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::gaussian:
      return "gaussian";
    case KernelKind::log:
      return "log";
    case KernelKind::binomial3:
      return "binomial3";
    case KernelKind::custom:
      return "custom";
  }
  return "unknown";
}

Kernel1D Kernel1D::from_taps(std::vector<double> taps) {
  if (taps.empty() || taps.size() % 2 == 0) {
    throw Error(Errc::invalid_parameter, "kernel length must be odd");
  }
  return Kernel1D(0.0, KernelKind::custom, std::move(taps));
}

Kernel2D Kernel2D::from_taps(int size, std::vector<double> taps) {
  if (size < 1 || size % 2 == 0 ||
      taps.size() != static_cast<std::size_t>(size) * size) {
    throw Error(Errc::invalid_parameter,
                "kernel must be an odd-sized square grid");
  }
  return Kernel2D(0.0, KernelKind::custom, size, std::move(taps));
}

double Kernel2D::sum() const { return sum_of(taps_); }

int size_rule(double sigma) {
  check_sigma(sigma);
  int size = static_cast<int>(std::lround(4.0 * sigma)) + 1;
  if (size % 2 == 0) ++size;
  return std::max(size, 3);
}

Kernel1D gaussian_1d(double sigma) {
  const int size = size_rule(sigma);
  const int r = size / 2;
  const double denom = 2.0 * sigma * sigma;
  std::vector<double> taps(size);
  for (int u = 0; u <= r; ++u) {
    const double value = std::exp(-(static_cast<double>(u) * u) / denom);
    taps[r + u] = value;
    taps[r - u] = value;
  }
  const double total = sum_of(taps);
  for (double& t : taps) t /= total;
  return Kernel1D(sigma, KernelKind::gaussian, std::move(taps));
}

Kernel2D gaussian_2d(double sigma) {
  const int size = size_rule(sigma);
  const double denom = 2.0 * sigma * sigma;
  auto taps = mirrored_grid(size, [&](int a, int b) {
    return std::exp(-(static_cast<double>(a) * a + static_cast<double>(b) * b) /
                    denom);
  });
  const double total = sum_of(taps);
  for (double& t : taps) t /= total;
  return Kernel2D(sigma, KernelKind::gaussian, size, std::move(taps));
}

Kernel2D binomial3() {
  std::vector<double> taps = {1, 2, 1, 2, 4, 2, 1, 2, 1};
  for (double& t : taps) t /= 16.0;
  return Kernel2D(0.0, KernelKind::binomial3, 3, std::move(taps));
}

double log_response(double x, double y, double sigma) {
  const double s2 = sigma * sigma;
  const double r2 = x * x + y * y;
  return (r2 - 2.0 * s2) / (s2 * s2) * std::exp(-r2 / (2.0 * s2));
}

Kernel2D log_2d_uncorrected(double sigma) {
  const int size = size_rule(sigma);
  auto taps = mirrored_grid(
      size, [&](int a, int b) { return log_response(a, b, sigma); });
  return Kernel2D(sigma, KernelKind::log, size, std::move(taps));
}

Kernel2D log_2d(double sigma) {
  Kernel2D k = log_2d_uncorrected(sigma);
  const double mean = k.sum() / static_cast<double>(k.taps_.size());
  for (double& t : k.taps_) t -= mean;
  return k;
}

std::vector<SeparableTerm> log_2d_separable(double sigma) {
  const int size = size_rule(sigma);
  const int r = size / 2;
  const double s2 = sigma * sigma;
  std::vector<double> gauss(size);
  std::vector<double> second(size);
  for (int u = -r; u <= r; ++u) {
    const double g = std::exp(-(static_cast<double>(u) * u) / (2.0 * s2));
    gauss[u + r] = g;
    second[u + r] = (static_cast<double>(u) * u - s2) / (s2 * s2) * g;
  }
  const Kernel2D raw = log_2d_uncorrected(sigma);
  const double mean = raw.sum() / (static_cast<double>(size) * size);

  std::vector<SeparableTerm> terms;
  terms.push_back({second, gauss});
  terms.push_back({gauss, second});
  terms.push_back({std::vector<double>(size, -mean), std::vector<double>(size, 1.0)});
  return terms;
}

}  // namespace hybridscope
