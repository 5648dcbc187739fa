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

#ifndef HYBRIDSCOPE_IMAGE_IO_HPP_
#define HYBRIDSCOPE_IMAGE_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "hybridscope/image.hpp"

namespace hybridscope {

enum class EncodedFormat { png, ppm };

/// Guesses the format from a file extension (.png, .ppm, .pgm, .pnm).
std::optional<EncodedFormat> format_for_path(const std::filesystem::path& p);

/// Decodes an 8-bit PNG (gray, RGB or palette without transparency) or a
/// binary P5/P6 netpbm file with maxval 255. Byte v becomes v / 255.
/// Alpha channels are rejected with Errc::decode_error.
Image decode(std::span<const std::uint8_t> bytes);

/// Encodes with v = floor(value * 255 + 0.5). Samples outside [0, 1] (or NaN)
/// raise Errc::encode_error. Gray images become PGM (P5) under `ppm`.
std::vector<std::uint8_t> encode(const Image& img, EncodedFormat fmt);

Image load(const std::filesystem::path& path);

/// Writes through a temporary sibling file and renames it into place, so a
/// failed encode never leaves a partial file behind.
void save(const Image& img, const std::filesystem::path& path,
          EncodedFormat fmt);

/// Writes raw bytes with the same temp-and-rename discipline as save().
void write_file_atomic(const std::filesystem::path& path,
                       std::span<const std::uint8_t> bytes);

/// Center-aligned bilinear resampling with edge clamping. Returns an exact
/// copy when the size is unchanged.
Image resize_bilinear(const Image& img, int width, int height);

}  // namespace hybridscope

#endif  // HYBRIDSCOPE_IMAGE_IO_HPP_
