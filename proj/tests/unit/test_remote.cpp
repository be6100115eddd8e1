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

#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "rhetoric/lm.hpp"

using namespace rhetoric;
using nlohmann::json;

namespace {

// Loss server on an ephemeral port, stopped on destruction.
class TestServer {
 public:
  explicit TestServer(httplib::Server::Handler handler) {
    server_.Post("/v1/token_losses", std::move(handler));
    server_.new_task_queue = [] { return new httplib::ThreadPool(16); };
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~TestServer() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

RemoteOptions options(const std::string& url) {
  RemoteOptions o;
  o.url = url;
  o.retries = 2;
  o.backoff_ms = 1;
  o.timeout_ms = 2000;
  return o;
}

const ScoringRequest kReq{"Donald Trump:", "Hillary Clinton: Hello.", "We win.", ""};

}  // namespace

TEST_CASE("remote losses pass through and convert nats to bits") {
  json seen;
  TestServer server([&](const httplib::Request& req, httplib::Response& res) {
    seen = json::parse(req.body);
    res.set_content(R"({"tokens":["We"," win","."],"losses":[1.0,2.0,0.5],"base":"e"})",
                    "application/json");
  });
  RemoteBackend b(options(server.url()));
  const auto l = token_losses(b, kReq);
  CHECK(seen["prompt"] == "Donald Trump:");
  CHECK(seen["context"] == "Hillary Clinton: Hello.");
  CHECK(seen["target"] == "We win.");
  REQUIRE(l.tokens.size() == 3);
  CHECK(l.tokens[1] == " win");
  CHECK(std::abs(l.total_bits() - 3.5 / std::numbers::ln2) < 1e-12);
  CHECK(b.retry_count() == 0);
}

TEST_CASE("malformed replies are protocol errors") {
  CHECK_THROWS_AS(parse_loss_reply("nope"), ProtocolError);
  CHECK_THROWS_AS(parse_loss_reply(R"({"tokens":["a"],"losses":[],"base":"2"})"), ProtocolError);
  CHECK_THROWS_AS(parse_loss_reply(R"({"tokens":["a"],"losses":[1],"base":"10"})"),
                  ProtocolError);
  CHECK_THROWS_AS(parse_loss_reply(R"({"tokens":["a"],"losses":[-1],"base":"2"})"),
                  ProtocolError);
  CHECK(parse_loss_reply(R"({"tokens":["a"],"losses":[3],"base":"2"})").losses_bits[0] == 3.0);

  TestServer server([](const httplib::Request&, httplib::Response& res) {
    res.set_content("{\"tokens\": [", "application/json");
  });
  RemoteBackend b(options(server.url()));
  CHECK_THROWS_AS(b.token_losses(kReq), ProtocolError);
  CHECK(b.retry_count() == 0);
}

TEST_CASE("server errors are retried then surfaced") {
  std::atomic<int> calls{0};
  TestServer server([&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    res.status = 503;
  });
  RemoteBackend b(options(server.url()));
  CHECK_THROWS_AS(b.token_losses(kReq), RetryableError);
  CHECK(calls == 3);
  CHECK(b.retry_count() == 2);
}

TEST_CASE("an unreachable server is a retryable failure") {
  // Nothing listens on the tcpmux port here, so connects are refused.
  RemoteBackend b(options("http://127.0.0.1:1"));
  try {
    b.token_losses(kReq);
    FAIL("expected an error");
  } catch (const RetryableError& e) {
    CHECK(std::string(e.what()).find("3 attempts") != std::string::npos);
  }
  CHECK(b.retry_count() == 2);
}

TEST_CASE("in-flight requests stay under the limit") {
  std::atomic<int> active{0}, peak{0};
  TestServer server([&](const httplib::Request&, httplib::Response& res) {
    const int now = ++active;
    int p = peak.load();
    while (now > p && !peak.compare_exchange_weak(p, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    --active;
    res.set_content(R"({"tokens":["a"],"losses":[1],"base":"2"})", "application/json");
  });
  auto o = options(server.url());
  o.max_in_flight = 2;
  RemoteBackend b(o);
  std::vector<std::jthread> threads;
  for (int i = 0; i < 8; ++i) threads.emplace_back([&] { b.token_losses(kReq); });
  threads.clear();
  CHECK(peak.load() >= 1);
  CHECK(peak.load() <= 2);
}

TEST_CASE("remote options are validated") {
  CHECK_THROWS_AS(RemoteBackend{RemoteOptions{}}, Error);
  auto o = options("http://127.0.0.1:1");
  o.max_in_flight = 0;
  CHECK_THROWS_AS(RemoteBackend{o}, Error);
}
