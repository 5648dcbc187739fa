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

#include "hybridscope/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <system_error>

#include "hybridscope/error.hpp"

namespace hybridscope {
namespace {

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G',
                                           '\r', '\n', 0x1a, '\n'};

std::uint8_t quantize(double value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(Errc::encode_error,
                "sample " + std::to_string(value) +
                    " is outside [0, 1]; clamp before encoding");
  }
  return static_cast<std::uint8_t>(std::floor(value * 255.0 + 0.5));
}

// Interleaves planes into 8-bit pixels.
std::vector<std::uint8_t> interleave(const Image& img) {
  const int c = img.channels();
  std::vector<std::uint8_t> out(img.plane_size() * c);
  for (int ch = 0; ch < c; ++ch) {
    auto plane = img.plane(ch);
    for (std::size_t i = 0; i < plane.size(); ++i) {
      out[i * c + ch] = quantize(plane[i]);
    }
  }
  return out;
}

Image deinterleave(const std::uint8_t* pixels, int width, int height,
                   int channels) {
  Image img(width, height, channels);
  for (int ch = 0; ch < channels; ++ch) {
    auto plane = img.plane(ch);
    for (std::size_t i = 0; i < plane.size(); ++i) {
      plane[i] = pixels[i * channels + ch] / 255.0;
    }
  }
  return img;
}

Image decode_png(std::span<const std::uint8_t> bytes) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw Error(Errc::decode_error,
                std::string("malformed PNG: ") + image.message);
  }
  if (image.format & PNG_FORMAT_FLAG_ALPHA) {
    png_image_free(&image);
    throw Error(Errc::decode_error,
                "PNG has an alpha channel; flatten it before loading");
  }
  if (image.format & PNG_FORMAT_FLAG_LINEAR) {
    png_image_free(&image);
    throw Error(Errc::decode_error,
                "unsupported PNG bit depth (only 8-bit is accepted)");
  }
  const int channels = (image.format & PNG_FORMAT_FLAG_COLOR) ? 3 : 1;
  image.format = channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, pixels.data(), 0, nullptr)) {
    const std::string message = image.message;
    png_image_free(&image);
    throw Error(Errc::decode_error, "malformed PNG: " + message);
  }
  return deinterleave(pixels.data(), static_cast<int>(image.width),
                      static_cast<int>(image.height), channels);
}

std::vector<std::uint8_t> encode_png(const Image& img) {
  const auto pixels = interleave(img);
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = img.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, pixels.data(), 0,
                                 nullptr)) {
    throw Error(Errc::encode_error, std::string("PNG encode failed: ") +
                                        image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, pixels.data(),
                                 0, nullptr)) {
    throw Error(Errc::encode_error, std::string("PNG encode failed: ") +
                                        image.message);
  }
  out.resize(size);
  return out;
}

class NetpbmReader {
 public:
  explicit NetpbmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  long next_number(const char* what) {
    skip_space_and_comments();
    long value = 0;
    int digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_++] - '0');
      if (++digits > 9) break;
    }
    if (digits == 0 || digits > 9) {
      throw Error(Errc::decode_error,
                  std::string("malformed netpbm header: bad ") + what);
    }
    return value;
  }

  void expect_single_space() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw Error(Errc::decode_error,
                  "malformed netpbm header: missing whitespace before data");
    }
    ++pos_;
  }

  std::span<const std::uint8_t> rest() const { return bytes_.subspan(pos_); }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

Image decode_netpbm(std::span<const std::uint8_t> bytes) {
  const int channels = bytes[1] == '6' ? 3 : 1;
  NetpbmReader reader(bytes);
  const long width = reader.next_number("width");
  const long height = reader.next_number("height");
  const long maxval = reader.next_number("maxval");
  if (width < 1 || height < 1) {
    throw Error(Errc::decode_error, "netpbm image has zero size");
  }
  if (maxval != 255) {
    throw Error(Errc::decode_error,
                "unsupported netpbm bit depth (maxval " +
                    std::to_string(maxval) + ", expected 255)");
  }
  reader.expect_single_space();
  const auto data = reader.rest();
  const auto needed = static_cast<std::size_t>(width) * height * channels;
  if (data.size() < needed) {
    throw Error(Errc::decode_error, "truncated netpbm pixel data");
  }
  return deinterleave(data.data(), static_cast<int>(width),
                      static_cast<int>(height), channels);
}

std::vector<std::uint8_t> encode_netpbm(const Image& img) {
  const std::string header = std::string(img.channels() == 3 ? "P6" : "P5") +
                             "\n" + std::to_string(img.width()) + " " +
                             std::to_string(img.height()) + "\n255\n";
  const auto pixels = interleave(img);
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), pixels.begin(), pixels.end());
  return out;
}

}  // namespace

std::optional<EncodedFormat> format_for_path(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  if (ext == ".png") return EncodedFormat::png;
  if (ext == ".ppm" || ext == ".pgm" || ext == ".pnm") return EncodedFormat::ppm;
  return std::nullopt;
}

Image decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= sizeof(kPngSignature) &&
      std::equal(std::begin(kPngSignature), std::end(kPngSignature),
                 bytes.begin())) {
    return decode_png(bytes);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' &&
      (bytes[1] == '5' || bytes[1] == '6')) {
    return decode_netpbm(bytes);
  }
  throw Error(Errc::decode_error,
              "unrecognized image data (expected PNG or binary PPM/PGM)");
}

std::vector<std::uint8_t> encode(const Image& img, EncodedFormat fmt) {
  if (img.empty()) {
    throw Error(Errc::encode_error, "cannot encode an empty image");
  }
  return fmt == EncodedFormat::png ? encode_png(img) : encode_netpbm(img);
}

Image load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::io_error, "cannot open " + path.string());
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path,
                       std::span<const std::uint8_t> bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(Errc::io_error, "cannot write " + tmp.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      throw Error(Errc::io_error, "short write to " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(Errc::io_error, "cannot move output into " + path.string());
  }
}

void save(const Image& img, const std::filesystem::path& path,
          EncodedFormat fmt) {
  write_file_atomic(path, encode(img, fmt));
}

Image resize_bilinear(const Image& img, int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(Errc::invalid_parameter, "resize target must be at least 1x1");
  }
  if (width == img.width() && height == img.height()) return img;

  struct Tap {
    int i0;
    int i1;
    double t;
  };
  auto taps_for = [](int src, int dst) {
    std::vector<Tap> taps(dst);
    const double scale = static_cast<double>(src) / dst;
    for (int i = 0; i < dst; ++i) {
      double s = (i + 0.5) * scale - 0.5;
      s = std::clamp(s, 0.0, static_cast<double>(src - 1));
      const int i0 = static_cast<int>(std::floor(s));
      taps[i] = {i0, std::min(i0 + 1, src - 1), s - i0};
    }
    return taps;
  };
  const auto xs = taps_for(img.width(), width);
  const auto ys = taps_for(img.height(), height);

  Image out(width, height, img.channels());
  for (int c = 0; c < img.channels(); ++c) {
    for (int y = 0; y < height; ++y) {
      const Tap& ty = ys[y];
      for (int x = 0; x < width; ++x) {
        const Tap& tx = xs[x];
        const double top = std::lerp(img.at(c, tx.i0, ty.i0),
                                     img.at(c, tx.i1, ty.i0), tx.t);
        const double bottom = std::lerp(img.at(c, tx.i0, ty.i1),
                                        img.at(c, tx.i1, ty.i1), tx.t);
        out.at(c, x, y) = std::lerp(top, bottom, ty.t);
      }
    }
  }
  return out;
}

}  // namespace hybridscope
