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

#include "hybridscope/convolve.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "hybridscope/error.hpp"
#include "parallel.hpp"

namespace hybridscope {
namespace {

void check_fits(const PlaneView& img, int kernel_size) {
  if (img.samples.empty() || img.width < 1 || img.height < 1) {
    throw Error(Errc::invalid_parameter, "cannot convolve an empty image");
  }
  const int limit = 2 * std::min(img.width, img.height) + 1;
  if (kernel_size > limit) {
    throw Error(Errc::kernel_too_large,
                "kernel of size " + std::to_string(kernel_size) +
                    " exceeds the limit of " + std::to_string(limit) +
                    " for a " + std::to_string(img.width) + "x" +
                    std::to_string(img.height) + " image");
  }
}

void count_taps(const ConvolveOptions& options, std::uint64_t n) {
#if HYBRIDSCOPE_OP_COUNTERS
  if (options.counter != nullptr) {
    options.counter->tap_multiplies.fetch_add(n, std::memory_order_relaxed);
  }
#else
  (void)options;
  (void)n;
#endif
}

// Index table for positions [-radius, n + radius) shifted by +radius.
std::vector<int> border_map(int n, int radius, BoundaryPolicy b) {
  std::vector<int> map(static_cast<std::size_t>(n) + 2 * radius);
  for (int i = 0; i < static_cast<int>(map.size()); ++i) {
    map[i] = resolve_index(i - radius, n, b);
  }
  return map;
}

void direct_plane(std::span<const double> in, int w, int h, const Kernel2D& k,
                  BoundaryPolicy b, std::span<double> out, unsigned threads) {
  const int r = k.radius();
  const int size = k.size();
  const int pw = w + 2 * r;
  const int ph = h + 2 * r;
  const auto cols = border_map(w, r, b);
  const auto rows = border_map(h, r, b);

  std::vector<double> padded(static_cast<std::size_t>(pw) * ph);
  for (int j = 0; j < ph; ++j) {
    for (int i = 0; i < pw; ++i) {
      padded[static_cast<std::size_t>(j) * pw + i] =
          (rows[j] < 0 || cols[i] < 0)
              ? 0.0
              : in[static_cast<std::size_t>(rows[j]) * w + cols[i]];
    }
  }

  const double* taps = k.taps().data();
  detail::parallel_rows(h, threads, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int v = -r; v <= r; ++v) {
          const double* prow = padded.data() +
                               static_cast<std::size_t>(y - v + r) * pw + x + r;
          const double* krow = taps + static_cast<std::size_t>(v + r) * size + r;
          for (int u = -r; u <= r; ++u) {
            acc += prow[-u] * krow[u];
          }
        }
        out[static_cast<std::size_t>(y) * w + x] = acc;
      }
    }
  });
}

void horizontal_pass(std::span<const double> in, int w, int h,
                     std::span<const double> taps, BoundaryPolicy b,
                     std::span<double> out, unsigned threads) {
  const int r = static_cast<int>(taps.size()) / 2;
  const auto cols = border_map(w, r, b);
  detail::parallel_rows(h, threads, [&](int y0, int y1) {
    std::vector<double> padded(static_cast<std::size_t>(w) + 2 * r);
    for (int y = y0; y < y1; ++y) {
      const double* row = in.data() + static_cast<std::size_t>(y) * w;
      for (std::size_t i = 0; i < padded.size(); ++i) {
        padded[i] = cols[i] < 0 ? 0.0 : row[cols[i]];
      }
      for (int x = 0; x < w; ++x) {
        const double* p = padded.data() + x + r;
        double acc = 0.0;
        for (int u = -r; u <= r; ++u) {
          acc += p[-u] * taps[u + r];
        }
        out[static_cast<std::size_t>(y) * w + x] = acc;
      }
    }
  });
}

void vertical_pass(std::span<const double> in, int w, int h,
                   std::span<const double> taps, BoundaryPolicy b,
                   std::span<double> out, unsigned threads) {
  const int r = static_cast<int>(taps.size()) / 2;
  const auto rows = border_map(h, r, b);
  detail::parallel_rows(h, threads, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      double* acc = out.data() + static_cast<std::size_t>(y) * w;
      std::fill(acc, acc + w, 0.0);
      for (int v = -r; v <= r; ++v) {
        const int src = rows[y - v + r];
        if (src < 0) continue;
        const double* row = in.data() + static_cast<std::size_t>(src) * w;
        const double t = taps[v + r];
        for (int x = 0; x < w; ++x) {
          acc[x] += row[x] * t;
        }
      }
    }
  });
}

void check_taps(std::span<const double> taps) {
  if (taps.empty() || taps.size() % 2 == 0) {
    throw Error(Errc::invalid_parameter, "separable taps must have odd length");
  }
}

}  // namespace

std::string_view to_string(BoundaryPolicy b) {
  switch (b) {
    case BoundaryPolicy::replicate:
      return "replicate";
    case BoundaryPolicy::reflect:
      return "reflect";
    case BoundaryPolicy::zero:
      return "zero";
  }
  return "unknown";
}

std::optional<BoundaryPolicy> parse_boundary(std::string_view name) {
  if (name == "replicate") return BoundaryPolicy::replicate;
  if (name == "reflect") return BoundaryPolicy::reflect;
  if (name == "zero") return BoundaryPolicy::zero;
  return std::nullopt;
}

int resolve_index(int i, int n, BoundaryPolicy b) {
  if (i >= 0 && i < n) return i;
  switch (b) {
    case BoundaryPolicy::replicate:
      return i < 0 ? 0 : n - 1;
    case BoundaryPolicy::reflect: {
      const int period = 2 * n;
      int m = i % period;
      if (m < 0) m += period;
      return m < n ? m : period - 1 - m;
    }
    case BoundaryPolicy::zero:
      return -1;
  }
  return -1;
}

std::optional<Point> resolve(Point p, BoundaryPolicy b, Extent bounds) {
  const int x = resolve_index(p.x, bounds.width, b);
  const int y = resolve_index(p.y, bounds.height, b);
  if (x < 0 || y < 0) return std::nullopt;
  return Point{x, y};
}

bool op_counters_enabled() noexcept { return HYBRIDSCOPE_OP_COUNTERS != 0; }

SignedImage convolve2d(const PlaneView& img, const Kernel2D& k,
                       BoundaryPolicy b, const ConvolveOptions& options) {
  check_fits(img, k.size());
  SignedImage out(img.width, img.height, img.channels);
  for (int c = 0; c < img.channels; ++c) {
    direct_plane(img.plane(c), img.width, img.height, k, b, out.plane(c),
                 options.threads);
  }
  count_taps(options, static_cast<std::uint64_t>(k.size()) * k.size() *
                          img.samples.size());
  return out;
}

SignedImage convolve_separable(const PlaneView& img,
                               std::span<const double> horizontal,
                               std::span<const double> vertical,
                               BoundaryPolicy b,
                               const ConvolveOptions& options) {
  check_taps(horizontal);
  check_taps(vertical);
  check_fits(img, static_cast<int>(std::max(horizontal.size(), vertical.size())));
  SignedImage out(img.width, img.height, img.channels);
  std::vector<double> tmp(static_cast<std::size_t>(img.width) * img.height);
  for (int c = 0; c < img.channels; ++c) {
    horizontal_pass(img.plane(c), img.width, img.height, horizontal, b, tmp,
                    options.threads);
    vertical_pass(tmp, img.width, img.height, vertical, b, out.plane(c),
                  options.threads);
  }
  count_taps(options, (horizontal.size() + vertical.size()) * img.samples.size());
  return out;
}

SignedImage convolve_terms(const PlaneView& img,
                           std::span<const SeparableTerm> terms,
                           BoundaryPolicy b, const ConvolveOptions& options) {
  if (terms.empty()) {
    throw Error(Errc::invalid_parameter, "no separable terms given");
  }
  SignedImage out = convolve_separable(img, terms[0].horizontal,
                                       terms[0].vertical, b, options);
  for (std::size_t t = 1; t < terms.size(); ++t) {
    const SignedImage part = convolve_separable(img, terms[t].horizontal,
                                                terms[t].vertical, b, options);
    auto dst = out.samples();
    auto src = part.samples();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  }
  return out;
}

}  // namespace hybridscope
