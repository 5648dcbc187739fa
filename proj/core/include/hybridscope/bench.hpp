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

#ifndef HYBRIDSCOPE_BENCH_HPP_
#define HYBRIDSCOPE_BENCH_HPP_

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybridscope/convolve.hpp"
#include "hybridscope/filters.hpp"
#include "hybridscope/image.hpp"

namespace hybridscope {

enum class FilterKind { lowpass, highpass_subtract, highpass_log };

std::string_view to_string(FilterKind k);
std::optional<FilterKind> parse_filter_kind(std::string_view name);

/// One timed (image, sigma, kind, strategy) cell.
struct BenchRecord {
  std::string image_id;
  int width = 0;
  int height = 0;
  int channels = 0;
  std::int64_t size_metric = 0;  // width * height * channels
  double sigma = 0.0;
  FilterKind filter_kind = FilterKind::lowpass;
  Strategy strategy = Strategy::separable;
  std::int64_t elapsed_ns = 0;  // minimum over repetitions
  int repetitions = 0;
  std::string timestamp;  // UTC, ISO-8601
  /// Set when the combination could not run (e.g. kernel too large);
  /// elapsed_ns is 0 in that case.
  std::optional<std::string> skip_reason;

  bool skipped() const noexcept { return skip_reason.has_value(); }
  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

struct BenchSuite {
  std::vector<BenchRecord> records;
  std::string machine_note;

  friend bool operator==(const BenchSuite&, const BenchSuite&) = default;
};

/// Time source for the harness. Tests inject a fake.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::int64_t monotonic_ns() = 0;
  virtual std::chrono::system_clock::time_point wall_now() = 0;
};

class SteadyClock final : public Clock {
 public:
  std::int64_t monotonic_ns() override;
  std::chrono::system_clock::time_point wall_now() override;
};

/// Advances by a fixed step on every monotonic read; wall time is frozen.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(std::int64_t step_ns,
                       std::chrono::system_clock::time_point wall = {})
      : step_ns_(step_ns), wall_(wall) {}

  std::int64_t monotonic_ns() override { return now_ += step_ns_; }
  std::chrono::system_clock::time_point wall_now() override { return wall_; }

 private:
  std::int64_t step_ns_;
  std::int64_t now_ = 0;
  std::chrono::system_clock::time_point wall_;
};

struct BenchImage {
  std::string id;
  Image image;
};

inline const std::vector<double>& default_bench_sigmas() {
  static const std::vector<double> sigmas = {2, 4, 5, 7, 10, 15, 20, 25, 30};
  return sigmas;
}

struct BenchConfig {
  std::vector<double> sigmas = default_bench_sigmas();
  std::vector<FilterKind> kinds = {FilterKind::lowpass};
  std::vector<Strategy> strategies = {Strategy::direct, Strategy::separable};
  int repetitions = 3;
  BoundaryPolicy boundary = BoundaryPolicy::replicate;
  /// 1 keeps the engine serial so records stay comparable.
  unsigned threads = 1;
  std::string machine_note;
};

using BenchProgress = std::function<void(const BenchRecord&)>;

/// One record per image x sigma x kind x strategy, in that nesting order.
/// Only the filter call is timed.
BenchSuite run_bench(std::span<const BenchImage> images,
                     const BenchConfig& config, Clock& clock,
                     const BenchProgress& progress = {});

/// Runs one filter invocation of the given kind and returns a cheap checksum
/// of the output so callers can keep the work observable.
double run_filter(const Image& img, double sigma, FilterKind kind,
                  const FilterOptions& options);

std::string save_suite(const BenchSuite& suite);

/// Throws Errc::schema_error naming the offending field. Unknown fields are
/// ignored.
BenchSuite load_suite(std::string_view json);

/// Faceted scatter plot (one panel per filter kind): x = size_metric,
/// y = elapsed milliseconds, one <circle> per timed record, fill keyed by
/// sigma. Skipped records are not drawn.
std::string plot_scatter(const BenchSuite& suite);

/// Spearman rank correlation with average ranks for ties. Returns 0 when
/// either input has no spread.
double spearman(std::span<const double> a, std::span<const double> b);

/// Deterministic uniform-noise image in [0, 1).
Image synthetic_image(int width, int height, int channels, std::uint64_t seed);

/// Host description (OS, CPU count, engine mode) for BenchSuite.machine_note.
std::string describe_machine(unsigned threads);

std::string format_utc(std::chrono::system_clock::time_point t);

}  // namespace hybridscope

#endif  // HYBRIDSCOPE_BENCH_HPP_
