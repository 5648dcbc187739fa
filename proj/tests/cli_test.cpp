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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include "hybridscope/bench.hpp"
#include "hybridscope/filters.hpp"
#include "hybridscope/image_io.hpp"
#include "oracles.hpp"

namespace hybridscope {
namespace {

namespace fs = std::filesystem;
using testing::random_image;

struct RunResult {
  int status;
  std::string output;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(HYBRIDSCOPE_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe)) out.append(buf, n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hybridscope_cli_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const Image& img) {
    save(img, path(name), *format_for_path(name));
    return path(name);
  }

  fs::path dir_;
};

TEST_F(CliTest, BlurKeepsDimensions) {
  const auto in = write("in.png", random_image(40, 30, 3, 1));
  const auto r = run("blur -i " + in + " -o " + path("out.png") + " --sigma 7");
  ASSERT_EQ(r.status, 0) << r.output;
  const Image out = load(path("out.png"));
  EXPECT_EQ(out.extent(), (Extent{40, 30}));
  EXPECT_EQ(out, decode(encode(lowpass(load(in), 7.0), EncodedFormat::png)));
}

TEST_F(CliTest, BlurRejectsBadArguments) {
  const auto in = write("in.png", Image(8, 8, 1, 0.5));
  EXPECT_EQ(run("blur -i " + in + " -o " + path("o.png") + " --sigma 0").status, 2);
  EXPECT_EQ(run("blur -i " + in + " -o " + path("o.png") + " --sigma -1").status, 2);
  EXPECT_EQ(run("blur -i " + in + " -o " + path("o.png") + " --boundary wrap").status, 2);
  const auto missing = run("blur -i " + path("nope.png") + " -o " + path("o.png"));
  EXPECT_EQ(missing.status, 2);
  EXPECT_NE(missing.output.find("nope.png"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("o.png")));
}

TEST_F(CliTest, KernelTooLargeIsARuntimeFailure) {
  const auto in = write("in.png", Image(8, 8, 1, 0.5));
  const auto r = run("blur -i " + in + " -o " + path("o.png") + " --sigma 30");
  EXPECT_EQ(r.status, 1);
  EXPECT_FALSE(fs::exists(path("o.png")));
}

TEST_F(CliTest, HighpassOfConstantIsMidGray) {
  const auto in = write("flat.png", Image(20, 20, 3, 0.7));
  ASSERT_EQ(run("highpass -i " + in + " -o " + path("hp.ppm") + " --sigma 3").status, 0);
  const Image hp = load(path("hp.ppm"));
  for (double v : hp.samples()) EXPECT_EQ(v, 128 / 255.0);

  ASSERT_EQ(run("highpass -i " + in + " -o " + path("log.png") + " --sigma 2 --mode log").status, 0);
  const Image log = load(path("log.png"));
  for (double v : log.samples()) EXPECT_NEAR(v * 255, 128, 1.0);

  EXPECT_EQ(run("highpass -i " + in + " -o " + path("x.png") + " --mode sobel").status, 2);
}

TEST_F(CliTest, HybridWeightOneMatchesBlur) {
  const auto low = write("low.png", random_image(32, 32, 3, 2));
  const auto high = write("high.png", random_image(32, 32, 3, 3));
  ASSERT_EQ(run("blur -i " + low + " -o " + path("blur.png") + " --sigma 4").status, 0);
  ASSERT_EQ(run("hybrid --low " + low + " --high " + high + " -o " + path("hy.png") +
                " --sigma-low 4 --sigma-high 2 --weight 1")
                .status,
            0);
  EXPECT_EQ(slurp(path("blur.png")), slurp(path("hy.png")));
}

TEST_F(CliTest, HybridDefaultsMatchLibrary) {
  const auto low = write("low.png", random_image(36, 30, 3, 4));
  const auto high = write("high.png", random_image(30, 40, 3, 5));
  const auto r = run("hybrid --low " + low + " --high " + high + " -o " + path("hy.png"));
  ASSERT_EQ(r.status, 0) << r.output;
  const auto [l, h] = match_dimensions(load(low), load(high));
  const Image expected = hybrid(l, h, BlendSpec{});
  EXPECT_EQ(slurp(path("hy.png")), [&] {
    const auto bytes = encode(expected, EncodedFormat::png);
    return std::string(bytes.begin(), bytes.end());
  }());
  EXPECT_EQ(load(path("hy.png")).extent(), (Extent{30, 30}));
}

TEST_F(CliTest, HybridPyramid) {
  const auto low = write("low.png", random_image(64, 48, 3, 6));
  const auto high = write("high.png", random_image(64, 48, 3, 7));
  ASSERT_EQ(run("hybrid --low " + low + " --high " + high + " -o " + path("p.png") +
                " --sigma-low 2 --sigma-high 2 --pyramid-levels 3 --pyramid-gap 8")
                .status,
            0);
  const Image strip = load(path("p.png"));
  EXPECT_EQ(strip.width(), 64 + 32 + 16 + 2 * 8);
  EXPECT_EQ(strip.height(), 48);
}

TEST_F(CliTest, HybridChannelMismatchLeavesNoOutput) {
  const auto low = write("low.png", Image(16, 16, 3, 0.5));
  const auto high = write("high.pgm", Image(16, 16, 1, 0.5));
  const auto r = run("hybrid --low " + low + " --high " + high + " -o " + path("hy.png") +
                     " --sigma-low 1 --sigma-high 1");
  EXPECT_EQ(r.status, 1);
  EXPECT_FALSE(fs::exists(path("hy.png")));
  for (const auto& entry : fs::directory_iterator(dir_)) {
    EXPECT_TRUE(entry.path().filename() == "low.png" || entry.path().filename() == "high.pgm")
        << entry.path();
  }
}

TEST_F(CliTest, HybridReportedBestIsReproducible) {
  const auto low = write("low.png", random_image(80, 64, 3, 8));
  const auto high = write("high.png", random_image(72, 70, 3, 9));
  const std::string args = "hybrid --low " + low + " --high " + high +
                           " --sigma-low 30 --sigma-high 30 --weight 0.65 -o ";
  ASSERT_EQ(run(args + path("a.png")).status, 0);
  ASSERT_EQ(run(args + path("b.png")).status, 0);
  EXPECT_EQ(slurp(path("a.png")), slurp(path("b.png")));
  EXPECT_EQ(load(path("a.png")).extent(), (Extent{72, 64}));
}

TEST_F(CliTest, BenchAndPlot) {
  const auto r = run("bench --synthetic --sigmas 2,4 --repetitions 1 --kinds lowpass,highpass_log "
                     "--strategies direct,separable -o " + path("b.json"));
  ASSERT_EQ(r.status, 0) << r.output;
  const BenchSuite suite = load_suite(slurp(path("b.json")));
  EXPECT_EQ(suite.records.size(), 3u * 2 * 2 * 2);
  for (const auto& rec : suite.records) {
    EXPECT_FALSE(rec.skipped());
    EXPECT_GT(rec.elapsed_ns, 0);
  }

  ASSERT_EQ(run("plot -i " + path("b.json") + " -o " + path("b.svg")).status, 0);
  const std::string svg = slurp(path("b.svg"));
  const std::regex circle("<circle");
  EXPECT_EQ(std::distance(std::sregex_iterator(svg.begin(), svg.end(), circle),
                          std::sregex_iterator()),
            static_cast<long>(suite.records.size()));
}

TEST_F(CliTest, BenchCorpus) {
  fs::create_directories(dir_ / "corpus");
  save(random_image(24, 24, 3, 10), dir_ / "corpus" / "a.png", EncodedFormat::png);
  save(random_image(16, 20, 1, 11), dir_ / "corpus" / "b.pgm", EncodedFormat::ppm);
  const auto r = run("bench --corpus " + path("corpus") +
                     " --sigmas 2 --repetitions 1 -o " + path("c.json"));
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_FALSE(load_suite(slurp(path("c.json"))).records.empty());

  fs::create_directories(dir_ / "empty");
  EXPECT_EQ(run("bench --corpus " + path("empty") + " -o " + path("e.json")).status, 2);
  EXPECT_FALSE(fs::exists(path("e.json")));
}

TEST_F(CliTest, PlotRejectsMalformedJson) {
  std::ofstream(path("bad.json")) << "{\"records\": 3}";
  EXPECT_EQ(run("plot -i " + path("bad.json") + " -o " + path("x.svg")).status, 1);
  EXPECT_FALSE(fs::exists(path("x.svg")));
}

TEST_F(CliTest, KernelDump) {
  const auto b = run("kernel-dump --kind binomial3");
  ASSERT_EQ(b.status, 0);
  EXPECT_NE(b.output.find("0.0625 0.125 0.0625"), std::string::npos) << b.output;
  EXPECT_NE(b.output.find("0.125 0.25 0.125"), std::string::npos);

  const auto g = run("kernel-dump --sigma 2");
  ASSERT_EQ(g.status, 0);
  int rows = 0;
  std::istringstream lines(g.output);
  double sum = 0;
  for (std::string line; std::getline(lines, line);) {
    if (line.rfind("sum ", 0) == 0) {
      sum = std::stod(line.substr(4));
    } else if (!line.empty()) {
      ++rows;
      std::istringstream cols(line);
      int n = 0;
      for (double v; cols >> v;) ++n;
      EXPECT_EQ(n, 9);
    }
  }
  EXPECT_EQ(rows, 9);
  EXPECT_NEAR(sum, 1.0, 1e-12);

  EXPECT_EQ(run("kernel-dump --sigma 0").status, 2);
  EXPECT_EQ(run("kernel-dump --kind sobel").status, 2);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("frobnicate").status, 2);
  EXPECT_EQ(run("hybrid --low x.png").status, 2);
  EXPECT_EQ(run("--help").status, 0);
}

}  // namespace
}  // namespace hybridscope
