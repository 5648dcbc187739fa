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

#include "hybridscope/bench.hpp"

#include <sys/utsname.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "hybridscope/error.hpp"
#include "json.hpp"

namespace hybridscope {
namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void schema_error(const std::string& where,
                               const std::string& what) {
  throw Error(Errc::schema_error, where + ": " + what);
}

const nlohmann::json& field(const nlohmann::json& obj, const char* name,
                            const std::string& where) {
  auto it = obj.find(name);
  if (it == obj.end()) {
    schema_error(where, std::string("missing field \"") + name + "\"");
  }
  return *it;
}

std::string string_field(const nlohmann::json& obj, const char* name,
                         const std::string& where) {
  const auto& v = field(obj, name, where);
  if (!v.is_string()) {
    schema_error(where, std::string("field \"") + name + "\" must be a string");
  }
  return v.get<std::string>();
}

std::int64_t int_field(const nlohmann::json& obj, const char* name,
                       const std::string& where) {
  const auto& v = field(obj, name, where);
  if (!v.is_number_integer()) {
    schema_error(where,
                 std::string("field \"") + name + "\" must be an integer");
  }
  return v.get<std::int64_t>();
}

double number_field(const nlohmann::json& obj, const char* name,
                    const std::string& where) {
  const auto& v = field(obj, name, where);
  if (!v.is_number()) {
    schema_error(where, std::string("field \"") + name + "\" must be a number");
  }
  return v.get<double>();
}

int checked_int(std::int64_t v, std::int64_t lo, const char* name,
                const std::string& where) {
  if (v < lo || v > std::numeric_limits<int>::max()) {
    schema_error(where, std::string("field \"") + name + "\" is out of range");
  }
  return static_cast<int>(v);
}

std::string fmt(const char* pattern, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, value);
  return buf;
}

// Ten well-separated hues, then evenly spaced HSL fallbacks.
std::string sigma_color(std::size_t index) {
  static const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                   "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                   "#bcbd22", "#17becf"};
  if (index < std::size(kPalette)) return kPalette[index];
  const int hue = static_cast<int>((index * 47) % 360);
  return "hsl(" + std::to_string(hue) + ",65%,45%)";
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

std::string_view to_string(FilterKind k) {
  switch (k) {
    case FilterKind::lowpass:
      return "lowpass";
    case FilterKind::highpass_subtract:
      return "highpass_subtract";
    case FilterKind::highpass_log:
      return "highpass_log";
  }
  return "unknown";
}

std::optional<FilterKind> parse_filter_kind(std::string_view name) {
  if (name == "lowpass") return FilterKind::lowpass;
  if (name == "highpass_subtract") return FilterKind::highpass_subtract;
  if (name == "highpass_log") return FilterKind::highpass_log;
  return std::nullopt;
}

std::int64_t SteadyClock::monotonic_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::chrono::system_clock::time_point SteadyClock::wall_now() {
  return std::chrono::system_clock::now();
}

std::string format_utc(std::chrono::system_clock::time_point t) {
  const std::time_t secs = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double run_filter(const Image& img, double sigma, FilterKind kind,
                  const FilterOptions& options) {
  auto checksum = [](const auto& out) {
    const auto s = out.samples();
    return s.front() + s.back();
  };
  switch (kind) {
    case FilterKind::lowpass:
      return checksum(lowpass(img, sigma, options));
    case FilterKind::highpass_subtract:
      return checksum(highpass(img, sigma, HighpassMode::subtract, options));
    case FilterKind::highpass_log:
      return checksum(highpass(img, sigma, HighpassMode::log, options));
  }
  return 0.0;
}

BenchSuite run_bench(std::span<const BenchImage> images,
                     const BenchConfig& config, Clock& clock,
                     const BenchProgress& progress) {
  if (images.empty() || config.sigmas.empty() || config.kinds.empty() ||
      config.strategies.empty()) {
    throw Error(Errc::invalid_parameter,
                "benchmark needs at least one image, sigma, kind and strategy");
  }
  if (config.repetitions < 1) {
    throw Error(Errc::invalid_parameter, "repetitions must be positive");
  }
  for (double sigma : config.sigmas) size_rule(sigma);

  BenchSuite suite;
  suite.machine_note = config.machine_note;
  volatile double sink = 0.0;
  for (const BenchImage& bi : images) {
    for (double sigma : config.sigmas) {
      for (FilterKind kind : config.kinds) {
        for (Strategy strategy : config.strategies) {
          BenchRecord rec;
          rec.image_id = bi.id;
          rec.width = bi.image.width();
          rec.height = bi.image.height();
          rec.channels = bi.image.channels();
          rec.size_metric = static_cast<std::int64_t>(rec.width) * rec.height *
                            rec.channels;
          rec.sigma = sigma;
          rec.filter_kind = kind;
          rec.strategy = strategy;
          rec.repetitions = config.repetitions;

          const FilterOptions options{config.boundary, strategy,
                                      {config.threads, nullptr}};
          std::int64_t best = std::numeric_limits<std::int64_t>::max();
          try {
            for (int r = 0; r < config.repetitions; ++r) {
              const std::int64_t t0 = clock.monotonic_ns();
              sink = sink + run_filter(bi.image, sigma, kind, options);
              const std::int64_t t1 = clock.monotonic_ns();
              best = std::min(best, t1 - t0);
            }
            rec.elapsed_ns = std::max<std::int64_t>(best, 0);
          } catch (const Error& e) {
            if (e.code() != Errc::kernel_too_large) throw;
            rec.elapsed_ns = 0;
            rec.skip_reason = e.what();
          }
          rec.timestamp = format_utc(clock.wall_now());
          if (progress) progress(rec);
          suite.records.push_back(std::move(rec));
        }
      }
    }
  }
  return suite;
}

std::string save_suite(const BenchSuite& suite) {
  if (suite.records.empty()) {
    throw Error(Errc::invalid_parameter, "refusing to save an empty suite");
  }
  ordered_json doc;
  doc["machine_note"] = suite.machine_note;
  ordered_json records = ordered_json::array();
  for (const BenchRecord& r : suite.records) {
    ordered_json j;
    j["image_id"] = r.image_id;
    j["width"] = r.width;
    j["height"] = r.height;
    j["channels"] = r.channels;
    j["size_metric"] = r.size_metric;
    j["sigma"] = r.sigma;
    j["filter_kind"] = to_string(r.filter_kind);
    j["strategy"] = to_string(r.strategy);
    j["elapsed_ns"] = r.elapsed_ns;
    j["repetitions"] = r.repetitions;
    j["timestamp"] = r.timestamp;
    if (r.skip_reason) j["skip_reason"] = *r.skip_reason;
    records.push_back(std::move(j));
  }
  doc["records"] = std::move(records);
  return doc.dump(2) + "\n";
}

BenchSuite load_suite(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::schema_error, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) schema_error("suite", "top level must be an object");

  BenchSuite suite;
  suite.machine_note = string_field(doc, "machine_note", "suite");
  const auto& records = field(doc, "records", "suite");
  if (!records.is_array()) {
    schema_error("suite", "field \"records\" must be an array");
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::string where = "records[" + std::to_string(i) + "]";
    const auto& j = records[i];
    if (!j.is_object()) schema_error(where, "record must be an object");
    BenchRecord r;
    r.image_id = string_field(j, "image_id", where);
    r.width = checked_int(int_field(j, "width", where), 1, "width", where);
    r.height = checked_int(int_field(j, "height", where), 1, "height", where);
    r.channels =
        checked_int(int_field(j, "channels", where), 1, "channels", where);
    r.size_metric = int_field(j, "size_metric", where);
    if (r.size_metric !=
        static_cast<std::int64_t>(r.width) * r.height * r.channels) {
      schema_error(where,
                   "field \"size_metric\" must equal width * height * channels");
    }
    r.sigma = number_field(j, "sigma", where);
    if (!(r.sigma > 0.0)) {
      schema_error(where, "field \"sigma\" must be positive");
    }
    const std::string kind = string_field(j, "filter_kind", where);
    auto parsed_kind = parse_filter_kind(kind);
    if (!parsed_kind) {
      schema_error(where, "field \"filter_kind\" has unknown value \"" + kind + "\"");
    }
    r.filter_kind = *parsed_kind;
    const std::string strategy = string_field(j, "strategy", where);
    auto parsed_strategy = parse_strategy(strategy);
    if (!parsed_strategy) {
      schema_error(where,
                   "field \"strategy\" has unknown value \"" + strategy + "\"");
    }
    r.strategy = *parsed_strategy;
    r.elapsed_ns = int_field(j, "elapsed_ns", where);
    if (r.elapsed_ns < 0) {
      schema_error(where, "field \"elapsed_ns\" must be non-negative");
    }
    r.repetitions = checked_int(int_field(j, "repetitions", where), 1,
                                "repetitions", where);
    r.timestamp = string_field(j, "timestamp", where);
    if (j.contains("skip_reason")) {
      r.skip_reason = string_field(j, "skip_reason", where);
    }
    suite.records.push_back(std::move(r));
  }
  return suite;
}

std::string plot_scatter(const BenchSuite& suite) {
  if (suite.records.empty()) {
    throw Error(Errc::invalid_parameter, "cannot plot an empty suite");
  }
  constexpr double kPanelW = 760, kPanelH = 420;
  constexpr double kLeft = 90, kRight = 160, kTop = 40, kBottom = 60;
  constexpr double kPlotW = kPanelW - kLeft - kRight;
  constexpr double kPlotH = kPanelH - kTop - kBottom;

  std::vector<double> sigmas;
  for (const auto& r : suite.records) sigmas.push_back(r.sigma);
  std::sort(sigmas.begin(), sigmas.end());
  sigmas.erase(std::unique(sigmas.begin(), sigmas.end()), sigmas.end());
  auto color_of = [&](double sigma) {
    const auto it = std::lower_bound(sigmas.begin(), sigmas.end(), sigma);
    return sigma_color(static_cast<std::size_t>(it - sigmas.begin()));
  };

  std::vector<FilterKind> kinds;
  for (FilterKind k : {FilterKind::lowpass, FilterKind::highpass_subtract,
                       FilterKind::highpass_log}) {
    if (std::any_of(suite.records.begin(), suite.records.end(),
                    [&](const BenchRecord& r) { return r.filter_kind == k; })) {
      kinds.push_back(k);
    }
  }

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << kPanelW << "\" height=\"" << kPanelH * kinds.size() << "\" "
      << "font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  for (std::size_t panel = 0; panel < kinds.size(); ++panel) {
    const FilterKind kind = kinds[panel];
    std::vector<const BenchRecord*> points;
    for (const auto& r : suite.records) {
      if (r.filter_kind == kind && !r.skipped()) points.push_back(&r);
    }
    std::stable_sort(points.begin(), points.end(),
                     [](const BenchRecord* a, const BenchRecord* b) {
                       if (a->image_id != b->image_id) return a->image_id < b->image_id;
                       if (a->sigma != b->sigma) return a->sigma < b->sigma;
                       return a->strategy < b->strategy;
                     });
    double x_max = 1.0, y_max = 1e-6;
    for (const auto* r : points) {
      x_max = std::max(x_max, static_cast<double>(r->size_metric));
      y_max = std::max(y_max, r->elapsed_ns / 1e6);
    }
    x_max *= 1.05;
    y_max *= 1.05;

    const double oy = kPanelH * panel;
    const double x0 = kLeft, y0 = oy + kTop + kPlotH;
    svg << "<g id=\"panel-" << to_string(kind) << "\">\n";
    svg << "<text x=\"" << kPanelW / 2 << "\" y=\"" << oy + 24
        << "\" text-anchor=\"middle\" font-size=\"15\">" << to_string(kind)
        << ": time vs size</text>\n";
    svg << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 + kPlotW
        << "\" y2=\"" << y0 << "\" stroke=\"#000\"/>\n";
    svg << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0
        << "\" y2=\"" << y0 - kPlotH << "\" stroke=\"#000\"/>\n";
    for (int t = 0; t <= 5; ++t) {
      const double fx = x0 + kPlotW * t / 5.0;
      const double fy = y0 - kPlotH * t / 5.0;
      svg << "<text x=\"" << fmt("%.2f", fx) << "\" y=\"" << y0 + 18
          << "\" text-anchor=\"middle\">" << fmt("%.4g", x_max * t / 5.0)
          << "</text>\n";
      svg << "<text x=\"" << x0 - 8 << "\" y=\"" << fmt("%.2f", fy + 4)
          << "\" text-anchor=\"end\">" << fmt("%.4g", y_max * t / 5.0)
          << "</text>\n";
    }
    svg << "<text x=\"" << x0 + kPlotW / 2 << "\" y=\"" << y0 + 42
        << "\" text-anchor=\"middle\">size (height x width x channels)</text>\n";
    svg << "<text x=\"20\" y=\"" << y0 - kPlotH / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
        << y0 - kPlotH / 2 << ")\">time (ms)</text>\n";

    for (const auto* r : points) {
      const double cx = x0 + kPlotW * (r->size_metric / x_max);
      const double cy = y0 - kPlotH * ((r->elapsed_ns / 1e6) / y_max);
      svg << "<circle cx=\"" << fmt("%.2f", cx) << "\" cy=\"" << fmt("%.2f", cy)
          << "\" r=\"4\" fill=\"" << color_of(r->sigma) << "\" data-sigma=\""
          << fmt("%g", r->sigma) << "\" data-strategy=\""
          << to_string(r->strategy) << "\"";
      if (r->strategy == Strategy::direct) svg << " stroke=\"#000\"";
      svg << "/>\n";
    }

    double ly = oy + kTop;
    const double lx = kPanelW - kRight + 20;
    for (double sigma : sigmas) {
      svg << "<rect x=\"" << lx << "\" y=\"" << ly << "\" width=\"10\" height=\"10\" fill=\""
          << color_of(sigma) << "\"/>"
          << "<text x=\"" << lx + 16 << "\" y=\"" << ly + 10 << "\">sigma="
          << fmt("%g", sigma) << "</text>\n";
      ly += 16;
    }
    svg << "<text x=\"" << lx << "\" y=\"" << ly + 14
        << "\">outlined: direct</text>\n";
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw Error(Errc::invalid_parameter,
                "spearman needs two equally sized samples of length >= 2");
  }
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  const double mean = (n + 1.0) / 2.0;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    cov += (ra[i] - mean) * (rb[i] - mean);
    va += (ra[i] - mean) * (ra[i] - mean);
    vb += (rb[i] - mean) * (rb[i] - mean);
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

Image synthetic_image(int width, int height, int channels, std::uint64_t seed) {
  Image img(width, height, channels);
  std::mt19937_64 gen(seed);
  for (double& v : img.samples()) {
    v = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  }
  return img;
}

std::string describe_machine(unsigned threads) {
  std::ostringstream note;
  utsname info{};
  if (uname(&info) == 0) {
    note << info.sysname << " " << info.release << " " << info.machine << "; ";
  }
  note << "hardware threads=" << std::thread::hardware_concurrency() << "; ";
  if (threads == 1) {
    note << "engine=serial";
  } else {
    note << "engine=parallel(threads=" << threads << ")";
  }
  return note.str();
}

}  // namespace hybridscope
