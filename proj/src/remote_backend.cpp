// Copyright 2026 The Rhetoric Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Loss-server client.

#include <chrono>
#include <cmath>
#include <numbers>
#include <semaphore>
#include <thread>

#include <fmt/format.h>

#include "httplib.h"
#include "json.hpp"
#include "rhetoric/lm.hpp"

namespace rhetoric {

using nlohmann::json;

struct RemoteBackend::Limiter {
  explicit Limiter(int n) : slots(n) {}
  std::counting_semaphore<1024> slots;
};

namespace {

class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<1024>& s) : s_(s) { s_.acquire(); }
  ~SlotGuard() { s_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<1024>& s_;
};

}  // namespace

RemoteBackend::RemoteBackend(RemoteOptions options) : options_(std::move(options)) {
  if (options_.url.empty()) throw Error("remote backend needs a server URL");
  if (options_.max_in_flight < 1 || options_.max_in_flight > 1024) {
    throw Error("max_in_flight must be in [1, 1024]");
  }
  if (options_.retries < 0) throw Error("retries must be nonnegative");
  limiter_ = std::make_unique<Limiter>(options_.max_in_flight);
}

RemoteBackend::~RemoteBackend() = default;

TokenLossSequence parse_loss_reply(std::string_view body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception& e) {
    throw ProtocolError(fmt::format("loss server reply is not JSON ({})", e.what()));
  }
  if (!j.is_object() || !j.contains("tokens") || !j.contains("losses") || !j.contains("base")) {
    throw ProtocolError("loss server reply lacks tokens, losses or base");
  }
  const auto& tokens = j["tokens"];
  const auto& losses = j["losses"];
  if (!tokens.is_array() || !losses.is_array() || tokens.size() != losses.size()) {
    throw ProtocolError("loss server reply has mismatched tokens and losses");
  }
  if (!j["base"].is_string()) throw ProtocolError("loss server reply base must be a string");
  const std::string base = j["base"].get<std::string>();
  double scale = 1.0;
  if (base == "e") {
    scale = 1.0 / std::numbers::ln2;
  } else if (base != "2") {
    throw ProtocolError(fmt::format("loss server reply has unknown base '{}'", base));
  }
  TokenLossSequence out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!tokens[i].is_string() || !losses[i].is_number()) {
      throw ProtocolError("loss server reply has a non-string token or non-numeric loss");
    }
    const double l = losses[i].get<double>();
    if (!std::isfinite(l) || l < 0.0) {
      throw ProtocolError(fmt::format("loss server reply has invalid loss {}", l));
    }
    out.tokens.push_back(tokens[i].get<std::string>());
    out.losses_bits.push_back(l * scale);
  }
  return out;
}

TokenLossSequence RemoteBackend::token_losses(const ScoringRequest& req) const {
  req.validate();
  const std::string body =
      json{{"prompt", req.speaker_prompt}, {"context", req.context}, {"target", req.target}}.dump();

  SlotGuard slot(limiter_->slots);
  std::string last_error;
  for (int attempt = 0; attempt <= options_.retries; ++attempt) {
    if (attempt > 0) {
      retries_.fetch_add(1);
      fmt::print(stderr, "loss server {}: retry {}/{} after: {}\n", options_.url, attempt,
                 options_.retries, last_error);
      std::this_thread::sleep_for(std::chrono::milliseconds(options_.backoff_ms * attempt));
    }
    httplib::Client client(options_.url);
    const auto timeout = std::chrono::milliseconds(options_.timeout_ms);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    auto res = client.Post("/v1/token_losses", body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = fmt::format("HTTP {}", res->status);
      continue;
    }
    if (res->status != 200) {
      throw ProtocolError(fmt::format("loss server answered HTTP {}", res->status));
    }
    return parse_loss_reply(res->body);
  }
  throw RetryableError(fmt::format("loss server {} unreachable after {} attempts: {}",
                                   options_.url, options_.retries + 1, last_error));
}

}  // namespace rhetoric
