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

#include "hybridscope/image.hpp"

#include <algorithm>

namespace hybridscope {

Image clamp_to_unit(const SignedImage& img) {
  Image out(img.width(), img.height(), img.channels());
  auto src = img.samples();
  auto dst = out.samples();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = std::clamp(src[i], 0.0, 1.0);
  }
  return out;
}

}  // namespace hybridscope
