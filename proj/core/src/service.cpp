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

#include "hybridscope/service.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <list>
#include <mutex>
#include <optional>
#include <random>
#include <unordered_map>

#include "httplib.h"
#include "hybridscope/error.hpp"
#include "hybridscope/filters.hpp"
#include "hybridscope/image_io.hpp"
#include "hybridscope/kernels.hpp"
#include "json.hpp"

namespace hybridscope {
namespace {

constexpr double kMinSigma = 0.5;
constexpr double kMaxSigma = 30.0;

struct Session {
  std::string id;
  Image low;
  Image high;
  std::chrono::system_clock::time_point created_at;
  std::mutex mu;  // serializes renders on one session
};

class SessionStore {
 public:
  explicit SessionStore(std::size_t capacity)
      : capacity_(std::max<std::size_t>(capacity, 1)) {}

  void insert(std::shared_ptr<Session> s) {
    std::lock_guard lock(mu_);
    const std::string id = s->id;
    lru_.push_front(id);
    map_[id] = {std::move(s), lru_.begin()};
    while (map_.size() > capacity_) {
      map_.erase(lru_.back());
      lru_.pop_back();
    }
  }

  std::shared_ptr<Session> find(const std::string& id) {
    std::lock_guard lock(mu_);
    auto it = map_.find(id);
    if (it == map_.end()) return nullptr;
    lru_.splice(lru_.begin(), lru_, it->second.second);
    return it->second.first;
  }

  bool erase(const std::string& id) {
    std::lock_guard lock(mu_);
    auto it = map_.find(id);
    if (it == map_.end()) return false;
    lru_.erase(it->second.second);
    map_.erase(it);
    return true;
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return map_.size();
  }

 private:
  using Entry = std::pair<std::shared_ptr<Session>, std::list<std::string>::iterator>;
  mutable std::mutex mu_;
  std::size_t capacity_;
  std::list<std::string> lru_;
  std::unordered_map<std::string, Entry> map_;
};

struct ParamError {
  std::string parameter;
  std::string message;
};

struct PreviewParams {
  double sigma_low = 7.0;
  double sigma_high = 7.0;
  double weight = 0.5;
  HighpassMode mode = HighpassMode::subtract;
  double scale = 1.0;
};

double parse_number(const httplib::Request& req, const char* name,
                    double fallback) {
  if (!req.has_param(name)) return fallback;
  const std::string text = req.get_param_value(name);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ParamError{name, std::string(name) + " must be a number"};
  }
  return value;
}

PreviewParams parse_params(const httplib::Request& req) {
  PreviewParams p;
  p.sigma_low = parse_number(req, "sigma_low", p.sigma_low);
  p.sigma_high = parse_number(req, "sigma_high", p.sigma_high);
  p.weight = parse_number(req, "weight", p.weight);
  p.scale = parse_number(req, "scale", p.scale);
  for (auto [name, value] : {std::pair{"sigma_low", p.sigma_low},
                             std::pair{"sigma_high", p.sigma_high}}) {
    if (value < kMinSigma || value > kMaxSigma) {
      throw ParamError{name, std::string(name) + " must lie in [0.5, 30]"};
    }
  }
  if (p.weight < 0.0 || p.weight > 1.0) {
    throw ParamError{"weight", "weight must lie in [0, 1]"};
  }
  if (p.scale <= 0.0 || p.scale > 1.0) {
    throw ParamError{"scale", "scale must lie in (0, 1]"};
  }
  if (req.has_param("mode")) {
    auto mode = parse_highpass_mode(req.get_param_value("mode"));
    if (!mode) throw ParamError{"mode", "mode must be subtract or log"};
    p.mode = *mode;
  }
  return p;
}

std::string canonical(const std::string& id, const char* what,
                      const PreviewParams& p) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "|%s|%.17g|%.17g|%.17g|%s|%.17g", what,
                p.sigma_low, p.sigma_high, p.weight,
                std::string(to_string(p.mode)).c_str(), p.scale);
  return id + buf;
}

std::string strong_etag(const std::string& key) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : key) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "\"%016llx\"", static_cast<unsigned long long>(h));
  return buf;
}

std::string new_session_id() {
  static std::mutex mu;
  static std::mt19937_64 gen{std::random_device{}()};
  std::lock_guard lock(mu);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%016llx%016llx",
                static_cast<unsigned long long>(gen()),
                static_cast<unsigned long long>(gen()));
  return buf;
}

std::string base64(const std::vector<std::uint8_t>& bytes) {
  static constexpr char kAlphabet[] =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  if (i + 1 == bytes.size()) {
    const std::uint32_t v = bytes[i] << 16;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += "==";
  } else if (i + 2 == bytes.size()) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8);
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += '=';
  }
  return out;
}

void send_error(httplib::Response& res, int status, const std::string& message,
                const std::string& parameter = {}) {
  nlohmann::json body = {{"error", message}};
  if (!parameter.empty()) body["parameter"] = parameter;
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

}  // namespace

struct TunerService::Impl {
  explicit Impl(ServiceConfig c) : config(std::move(c)), store(config.max_sessions) {}

  // Shrinks inputs for previews and rejects sigmas whose kernel would not
  // fit the (possibly shrunk) image.
  HybridLayers render_layers(Session& s, const PreviewParams& p) {
    Image low = s.low;
    Image high = s.high;
    BlendSpec spec;
    spec.sigma_low = p.sigma_low;
    spec.sigma_high = p.sigma_high;
    spec.highpass_mode = p.mode;
    spec.weight = p.weight;
    if (p.scale < 1.0) {
      const int w = std::max(1, static_cast<int>(std::lround(low.width() * p.scale)));
      const int h = std::max(1, static_cast<int>(std::lround(low.height() * p.scale)));
      low = resize_bilinear(low, w, h);
      high = resize_bilinear(high, w, h);
      spec.sigma_low *= p.scale;
      spec.sigma_high *= p.scale;
    }
    const int limit = 2 * std::min(low.width(), low.height()) + 1;
    if (size_rule(spec.sigma_low) > limit) {
      throw ParamError{"sigma_low", "sigma_low is too large for this image size"};
    }
    if (size_rule(spec.sigma_high) > limit) {
      throw ParamError{"sigma_high", "sigma_high is too large for this image size"};
    }
    return hybrid_layers(low, high, spec, {config.threads, nullptr});
  }

  void handle_create(const httplib::Request& req, httplib::Response& res) {
    if (!req.is_multipart_form_data()) {
      return send_error(res, 400, "expected multipart/form-data with fields low and high");
    }
    for (const char* name : {"low", "high"}) {
      if (!req.has_file(name)) {
        return send_error(res, 400, std::string("missing image field \"") + name + "\"");
      }
    }
    auto decode_field = [&](const char* name) {
      const std::string content = req.get_file_value(name).content;
      try {
        return decode(std::span(reinterpret_cast<const std::uint8_t*>(content.data()),
                                content.size()));
      } catch (const Error& e) {
        throw Error(e.code(), std::string(name) + ": " + e.what());
      }
    };
    auto session = std::make_shared<Session>();
    try {
      auto [low, high] = match_dimensions(decode_field("low"), decode_field("high"));
      session->low = std::move(low);
      session->high = std::move(high);
    } catch (const Error& e) {
      return send_error(res, 400, e.what());
    }
    session->id = new_session_id();
    session->created_at = std::chrono::system_clock::now();
    nlohmann::json body = {{"session_id", session->id},
                           {"width", session->low.width()},
                           {"height", session->low.height()}};
    store.insert(std::move(session));
    res.status = 201;
    res.set_content(body.dump(), "application/json");
  }

  template <class Render>
  void with_session(const httplib::Request& req, httplib::Response& res,
                    const char* what, Render&& render) {
    auto session = store.find(req.matches[1]);
    if (!session) return send_error(res, 404, "unknown session");
    try {
      const PreviewParams params = parse_params(req);
      const std::string etag = strong_etag(canonical(session->id, what, params));
      res.set_header("ETag", etag);
      res.set_header("Cache-Control", "private, no-cache");
      if (req.get_header_value("If-None-Match") == etag) {
        res.status = 304;
        return;
      }
      std::lock_guard lock(session->mu);
      render(*session, params);
    } catch (const ParamError& e) {
      send_error(res, 422, e.message, e.parameter);
    } catch (const Error& e) {
      send_error(res, 500, e.what());
    }
  }

  void handle_hybrid(const httplib::Request& req, httplib::Response& res) {
    with_session(req, res, "hybrid", [&](Session& s, const PreviewParams& p) {
      const Image out = blend_layers(render_layers(s, p), p.weight);
      const auto png = encode(out, EncodedFormat::png);
      res.status = 200;
      res.set_content(std::string(png.begin(), png.end()), "image/png");
    });
  }

  void handle_layers(const httplib::Request& req, httplib::Response& res) {
    with_session(req, res, "layers", [&](Session& s, const PreviewParams& p) {
      const HybridLayers layers = render_layers(s, p);
      nlohmann::json body = {
          {"low_png_b64", base64(encode(layers.low, EncodedFormat::png))},
          {"high_png_b64",
           base64(encode(visualize_signed(layers.high), EncodedFormat::png))}};
      res.status = 200;
      res.set_content(body.dump(), "application/json");
    });
  }

  void handle_delete(const httplib::Request& req, httplib::Response& res) {
    if (!store.erase(req.matches[1])) return send_error(res, 404, "unknown session");
    res.status = 204;
  }

  ServiceConfig config;
  SessionStore store;
  httplib::Server server;
};

TunerService::TunerService(ServiceConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {
  auto& svr = impl_->server;
  Impl* self = impl_.get();
  svr.Post("/session", [self](const httplib::Request& req, httplib::Response& res) {
    self->handle_create(req, res);
  });
  svr.Get(R"(/session/([0-9A-Za-z]+)/hybrid)",
          [self](const httplib::Request& req, httplib::Response& res) {
            self->handle_hybrid(req, res);
          });
  svr.Get(R"(/session/([0-9A-Za-z]+)/layers)",
          [self](const httplib::Request& req, httplib::Response& res) {
            self->handle_layers(req, res);
          });
  svr.Delete(R"(/session/([0-9A-Za-z]+))",
             [self](const httplib::Request& req, httplib::Response& res) {
               self->handle_delete(req, res);
             });
  if (!impl_->config.static_dir.empty()) {
    svr.set_mount_point("/", impl_->config.static_dir.string());
  }
}

TunerService::~TunerService() { stop(); }

int TunerService::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool TunerService::listen() { return impl_->server.listen_after_bind(); }

void TunerService::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void TunerService::wait_until_ready() const { impl_->server.wait_until_ready(); }

std::size_t TunerService::session_count() const { return impl_->store.size(); }

}  // namespace hybridscope
