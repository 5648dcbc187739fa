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

#ifndef HYBRIDSCOPE_SERVICE_HPP_
#define HYBRIDSCOPE_SERVICE_HPP_

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>

namespace hybridscope {

struct ServiceConfig {
  /// Sessions kept in memory; the least recently used one is evicted first.
  std::size_t max_sessions = 8;
  /// Optional directory of static assets (the tuner UI) served under "/".
  std::filesystem::path static_dir;
  /// Engine threads used per preview render.
  unsigned threads = 1;
};

/// Local HTTP API used by the browser tuner.
///
///   POST   /session                 multipart fields "low" and "high"
///   GET    /session/{id}/hybrid     ?sigma_low&sigma_high&weight&mode&scale
///   GET    /session/{id}/layers     ?sigma_low&sigma_high&mode&scale
///   DELETE /session/{id}
///
/// Sigmas are bounded to [0.5, 30], weight to [0, 1] and scale to (0, 1].
/// With scale < 1 both inputs (and both sigmas) are shrunk by that factor
/// before filtering, so a preview costs roughly scale^2 of a full render.
/// Nothing is ever written to disk.
class TunerService {
 public:
  explicit TunerService(ServiceConfig config = {});
  ~TunerService();

  TunerService(const TunerService&) = delete;
  TunerService& operator=(const TunerService&) = delete;

  /// Binds the listening socket; port 0 picks a free port. Returns the bound
  /// port, or -1 on failure.
  int bind(const std::string& host, int port);

  /// Serves requests until stop() is called. Call after bind().
  bool listen();

  void stop();
  void wait_until_ready() const;

  std::size_t session_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hybridscope

#endif  // HYBRIDSCOPE_SERVICE_HPP_
