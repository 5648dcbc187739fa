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

// hybridscope: command-line front end for the filtering toolkit.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <algorithm>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hybridscope/bench.hpp"
#include "hybridscope/error.hpp"
#include "hybridscope/filters.hpp"
#include "hybridscope/image_io.hpp"
#include "hybridscope/kernels.hpp"
#include "hybridscope/service.hpp"

namespace fs = std::filesystem;
namespace hs = hybridscope;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr std::uint64_t kSyntheticSeed = 0x5EED;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const CLI::Validator kPositive(
    [](std::string& s) -> std::string {
      double v = 0.0;
      try {
        std::size_t used = 0;
        v = std::stod(s, &used);
        if (used != s.size()) return "must be a positive number, got " + s;
      } catch (...) {
        return "must be a positive number, got " + s;
      }
      if (!std::isfinite(v) || v <= 0.0) {
        return "must be a positive number, got " + s;
      }
      return {};
    },
    "POSITIVE");

const std::vector<std::string> kBoundaries = {"replicate", "reflect", "zero"};
const std::vector<std::string> kModes = {"subtract", "log"};

// Enum options are parsed as strings; the IsMember checks guarantee these
// lookups succeed.
hs::BoundaryPolicy boundary_of(const std::string& s) {
  return *hs::parse_boundary(s);
}
hs::HighpassMode mode_of(const std::string& s) {
  return *hs::parse_highpass_mode(s);
}

hs::EncodedFormat output_format(const fs::path& out) {
  auto fmt = hs::format_for_path(out);
  if (!fmt) {
    throw UsageError("cannot infer image format from " + out.string() +
                     " (use .png, .ppm or .pgm)");
  }
  return *fmt;
}

void write_text(const fs::path& path, const std::string& text) {
  hs::write_file_atomic(
      path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                      text.size()));
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw hs::Error(hs::Errc::io_error, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct BlurArgs {
  std::string input, output;
  double sigma = 7.0;
  std::string boundary = "replicate";
};

struct HighpassArgs {
  std::string input, output;
  double sigma = 7.0;
  std::string mode = "subtract";
  std::string boundary = "replicate";
};

struct HybridArgs {
  std::string low, high, output;
  hs::BlendSpec blend;
  std::string mode = "subtract";
  std::string boundary = "replicate";
  hs::PyramidSpec pyramid{1, 0.5, 8};
};

struct BenchArgs {
  std::string corpus;
  bool synthetic = false;
  std::vector<double> sigmas = hs::default_bench_sigmas();
  std::vector<std::string> kinds = {"lowpass", "highpass_subtract"};
  std::vector<std::string> strategies = {"separable"};
  int repetitions = 3;
  unsigned threads = 1;
  std::string note;
  std::string output;
};

struct PlotArgs {
  std::string input, output;
};

struct DumpArgs {
  double sigma = 2.0;
  std::string kind = "gaussian";
};

struct ServeArgs {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t max_sessions = 8;
  std::string static_dir;
  unsigned threads = 1;
};

int cmd_blur(const BlurArgs& a) {
  const auto fmt = output_format(a.output);
  const hs::Image img = hs::load(a.input);
  hs::save(hs::lowpass(img, a.sigma, {.boundary = boundary_of(a.boundary)}), a.output, fmt);
  return 0;
}

int cmd_highpass(const HighpassArgs& a) {
  const auto fmt = output_format(a.output);
  const hs::Image img = hs::load(a.input);
  const hs::SignedImage response =
      hs::highpass(img, a.sigma, mode_of(a.mode), {.boundary = boundary_of(a.boundary)});
  hs::save(hs::visualize_signed(response), a.output, fmt);
  return 0;
}

int cmd_hybrid(HybridArgs a) {
  const auto fmt = output_format(a.output);
  a.blend.highpass_mode = mode_of(a.mode);
  a.blend.boundary = boundary_of(a.boundary);
  a.pyramid.validate();
  const auto [low, high] = hs::match_dimensions(hs::load(a.low), hs::load(a.high));
  hs::Image out = hs::hybrid(low, high, a.blend);
  if (a.pyramid.levels > 1) {
    hs::Pyramid p = hs::scale_pyramid(out, a.pyramid);
    if (static_cast<int>(p.levels.size()) < a.pyramid.levels) {
      std::cerr << "pyramid stopped after " << p.levels.size()
                << " levels (next level would be empty)\n";
    }
    out = std::move(p.strip);
  }
  hs::save(out, a.output, fmt);
  return 0;
}

std::vector<hs::BenchImage> bench_corpus(const BenchArgs& a) {
  std::vector<hs::BenchImage> images;
  if (a.synthetic) {
    std::uint64_t seed = kSyntheticSeed;
    for (int side : {64, 128, 256}) {
      images.push_back({"synthetic_" + std::to_string(side),
                        hs::synthetic_image(side, side, 3, seed++)});
    }
    return images;
  }
  std::error_code ec;
  if (!fs::is_directory(a.corpus, ec)) {
    throw UsageError("corpus directory not found: " + a.corpus);
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(a.corpus)) {
    if (entry.is_regular_file() && hs::format_for_path(entry.path())) {
      files.push_back(entry.path());
    }
  }
  if (files.empty()) {
    throw UsageError("no .png/.ppm/.pgm images in corpus directory " + a.corpus);
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    images.push_back({f.filename().string(), hs::load(f)});
  }
  return images;
}

int cmd_bench(const BenchArgs& a) {
  hs::BenchConfig config;
  config.sigmas = a.sigmas;
  config.kinds.clear();
  for (const auto& k : a.kinds) config.kinds.push_back(*hs::parse_filter_kind(k));
  config.strategies.clear();
  for (const auto& s : a.strategies) {
    config.strategies.push_back(*hs::parse_strategy(s));
  }
  config.repetitions = a.repetitions;
  config.threads = a.threads;
  config.machine_note = hs::describe_machine(a.threads);
  if (!a.note.empty()) config.machine_note += "; " + a.note;

  const auto images = bench_corpus(a);
  hs::SteadyClock clock;
  const hs::BenchSuite suite =
      hs::run_bench(images, config, clock, [](const hs::BenchRecord& r) {
        std::cerr << r.image_id << " sigma=" << r.sigma << " "
                  << hs::to_string(r.filter_kind) << "/"
                  << hs::to_string(r.strategy) << ": ";
        if (r.skipped()) {
          std::cerr << "skipped (" << *r.skip_reason << ")\n";
        } else {
          std::cerr << r.elapsed_ns / 1e6 << " ms\n";
        }
      });
  write_text(a.output, hs::save_suite(suite));
  return 0;
}

int cmd_plot(const PlotArgs& a) {
  const hs::BenchSuite suite = hs::load_suite(read_text(a.input));
  write_text(a.output, hs::plot_scatter(suite));
  return 0;
}

void print_grid(std::span<const double> taps, int rows, int cols) {
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c) std::printf(" ");
      std::printf("%.17g", taps[static_cast<std::size_t>(r) * cols + c]);
    }
    std::printf("\n");
  }
}

int cmd_kernel_dump(const DumpArgs& a) {
  double sum = 0.0;
  if (a.kind == "gaussian1d") {
    const hs::Kernel1D k = hs::gaussian_1d(a.sigma);
    print_grid(k.taps(), 1, k.size());
    for (double t : k.taps()) sum += t;
  } else {
    const hs::Kernel2D k = a.kind == "binomial3" ? hs::binomial3()
                           : a.kind == "log"     ? hs::log_2d(a.sigma)
                                                 : hs::gaussian_2d(a.sigma);
    print_grid(k.taps(), k.size(), k.size());
    sum = k.sum();
  }
  std::printf("sum %.17g\n", sum);
  return 0;
}

hs::TunerService* g_service = nullptr;

void on_signal(int) {
  if (g_service != nullptr) g_service->stop();
}

int cmd_serve(const ServeArgs& a) {
  hs::TunerService service(
      {a.max_sessions, a.static_dir.empty() ? fs::path{} : fs::path(a.static_dir),
       a.threads});
  const int port = service.bind(a.host, a.port);
  if (port < 0) {
    std::cerr << "cannot bind " << a.host << ":" << a.port << "\n";
    return kExitRuntime;
  }
  g_service = &service;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cout << "listening on http://" << a.host << ":" << port << "/" << std::endl;
  const bool ok = service.listen();
  g_service = nullptr;
  return ok ? 0 : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian / LoG filtering, hybrid images and filter benchmarks"};
  app.require_subcommand(1);

  BlurArgs blur;
  auto* blur_cmd = app.add_subcommand("blur", "Gaussian lowpass filter");
  blur_cmd->add_option("-i,--input", blur.input, "Input image")
      ->required()->check(CLI::ExistingFile);
  blur_cmd->add_option("-o,--output", blur.output, "Output image")->required();
  blur_cmd->add_option("--sigma", blur.sigma, "Gaussian sigma (pixels)")
      ->check(kPositive)->capture_default_str();
  blur_cmd->add_option("--boundary", blur.boundary, "Edge handling")
      ->check(CLI::IsMember(kBoundaries))->capture_default_str();

  HighpassArgs hp;
  auto* hp_cmd = app.add_subcommand(
      "highpass", "Highpass filter rendered around mid-gray");
  hp_cmd->add_option("-i,--input", hp.input, "Input image")
      ->required()->check(CLI::ExistingFile);
  hp_cmd->add_option("-o,--output", hp.output, "Output image")->required();
  hp_cmd->add_option("--sigma", hp.sigma, "Filter sigma (pixels)")
      ->check(kPositive)->capture_default_str();
  hp_cmd->add_option("--mode", hp.mode, "subtract (image - blur) or log")
      ->check(CLI::IsMember(kModes))->capture_default_str();
  hp_cmd->add_option("--boundary", hp.boundary, "Edge handling")
      ->check(CLI::IsMember(kBoundaries))->capture_default_str();

  HybridArgs hy;
  auto* hy_cmd = app.add_subcommand("hybrid", "Compose a hybrid image");
  hy_cmd->add_option("--low", hy.low, "Image contributing low frequencies")
      ->required()->check(CLI::ExistingFile);
  hy_cmd->add_option("--high", hy.high, "Image contributing high frequencies")
      ->required()->check(CLI::ExistingFile);
  hy_cmd->add_option("-o,--output", hy.output, "Output image")->required();
  hy_cmd->add_option("--sigma-low", hy.blend.sigma_low, "Lowpass sigma")
      ->check(kPositive)->capture_default_str();
  hy_cmd->add_option("--sigma-high", hy.blend.sigma_high, "Highpass sigma")
      ->check(kPositive)->capture_default_str();
  hy_cmd->add_option("--weight", hy.blend.weight, "Fraction of the lowpass layer")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  hy_cmd->add_option("--mode", hy.mode, "Highpass mode")
      ->check(CLI::IsMember(kModes))->capture_default_str();
  hy_cmd->add_option("--boundary", hy.boundary, "Edge handling")
      ->check(CLI::IsMember(kBoundaries))->capture_default_str();
  hy_cmd->add_option("--pyramid-levels", hy.pyramid.levels,
                     "Render a shrinking strip with this many copies")
      ->check(CLI::PositiveNumber)->capture_default_str();
  hy_cmd->add_option("--pyramid-scale", hy.pyramid.scale_factor,
                     "Scale of each strip copy relative to the previous")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  hy_cmd->add_option("--pyramid-gap", hy.pyramid.gap_px, "White gap in pixels")
      ->check(CLI::NonNegativeNumber)->capture_default_str();

  BenchArgs be;
  auto* be_cmd = app.add_subcommand("bench", "Time filters across image sizes");
  auto* corpus_opt =
      be_cmd->add_option("--corpus", be.corpus, "Directory of .png/.ppm/.pgm images");
  auto* synth_opt = be_cmd->add_flag(
      "--synthetic", be.synthetic,
      "Use seeded noise images of 64x64, 128x128 and 256x256 (RGB)");
  corpus_opt->excludes(synth_opt);
  be_cmd->add_option("--sigmas", be.sigmas, "Sigma sweep")
      ->check(kPositive)->delimiter(',')->capture_default_str();
  be_cmd->add_option("--kinds", be.kinds,
                     "lowpass, highpass_subtract, highpass_log")
      ->check(CLI::IsMember({"lowpass", "highpass_subtract", "highpass_log"}))
      ->delimiter(',')->capture_default_str();
  be_cmd->add_option("--strategies", be.strategies, "direct, separable")
      ->check(CLI::IsMember({"direct", "separable"}))
      ->delimiter(',')->capture_default_str();
  be_cmd->add_option("--repetitions", be.repetitions, "Runs per cell (minimum kept)")
      ->check(CLI::PositiveNumber)->capture_default_str();
  be_cmd->add_option("--threads", be.threads,
                     "Engine threads; 1 keeps runs serial, 0 uses all cores")
      ->capture_default_str();
  be_cmd->add_option("--machine-note", be.note, "Extra text for machine_note");
  be_cmd->add_option("-o,--out", be.output, "Output JSON")->required();

  PlotArgs pl;
  auto* pl_cmd = app.add_subcommand("plot", "Scatter plot of a benchmark JSON");
  pl_cmd->add_option("-i,--input", pl.input, "Benchmark JSON")
      ->required()->check(CLI::ExistingFile);
  pl_cmd->add_option("-o,--out", pl.output, "Output SVG")->required();

  DumpArgs du;
  auto* du_cmd = app.add_subcommand("kernel-dump", "Print kernel taps");
  du_cmd->add_option("--sigma", du.sigma, "Kernel sigma")
      ->check(kPositive)->capture_default_str();
  du_cmd->add_option("--kind", du.kind, "gaussian, gaussian1d, log, binomial3")
      ->check(CLI::IsMember({"gaussian", "gaussian1d", "log", "binomial3"}))
      ->capture_default_str();

  ServeArgs se;
  auto* se_cmd = app.add_subcommand("serve", "Run the interactive tuning service");
  se_cmd->add_option("--host", se.host, "Bind address")->capture_default_str();
  se_cmd->add_option("--port", se.port, "TCP port (0 picks a free one)")
      ->check(CLI::Range(0, 65535))->capture_default_str();
  se_cmd->add_option("--max-sessions", se.max_sessions, "Session cap (LRU)")
      ->check(CLI::PositiveNumber)->capture_default_str();
  se_cmd->add_option("--static-dir", se.static_dir, "Tuner UI assets")
      ->check(CLI::ExistingDirectory);
  se_cmd->add_option("--threads", se.threads, "Engine threads per render")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*blur_cmd) return cmd_blur(blur);
    if (*hp_cmd) return cmd_highpass(hp);
    if (*hy_cmd) return cmd_hybrid(hy);
    if (*be_cmd) {
      if (!be.synthetic && be.corpus.empty()) {
        throw UsageError("bench needs --corpus DIR or --synthetic");
      }
      return cmd_bench(be);
    }
    if (*pl_cmd) return cmd_plot(pl);
    if (*du_cmd) return cmd_kernel_dump(du);
    if (*se_cmd) return cmd_serve(se);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const hs::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == hs::Errc::invalid_parameter ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
