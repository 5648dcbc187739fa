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

#ifndef HYBRIDSCOPE_ERROR_HPP_
#define HYBRIDSCOPE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace hybridscope {

enum class Errc {
  invalid_parameter,
  kernel_too_large,
  dimension_mismatch,
  channel_mismatch,
  decode_error,
  encode_error,
  schema_error,
  io_error,
};

/// Every failure raised by the library carries one of the codes above so
/// front ends (CLI exit codes, HTTP statuses) can map it without parsing text.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace hybridscope

#endif  // HYBRIDSCOPE_ERROR_HPP_
