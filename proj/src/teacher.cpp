// Copyright 2026 The ltkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "ltkit/teacher.hpp"

#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "ltkit/digest.hpp"
#include "ltkit/errors.hpp"

namespace ltkit::teacher {
namespace {

std::string token_source_name(TokenCountSource s) {
  return s == TokenCountSource::provider ? "provider" : "estimated";
}

TokenCountSource token_source_from_name(const std::string& name) {
  if (name == "provider") return TokenCountSource::provider;
  return TokenCountSource::estimated;
}

}  // namespace

std::string request_digest(const CompletionRequest& req) {
  io::Json key;
  key["model_id"] = req.model_id;
  key["system_prompt"] = req.system_prompt;
  key["user_prompt"] = req.user_prompt;
  key["temperature"] = req.sampling.temperature;
  key["top_p"] = req.sampling.top_p;
  key["max_output_tokens"] = req.sampling.max_output_tokens;
  if (req.sample_index != 0) key["sample_index"] = req.sample_index;
  return sha256_hex(key.dump());
}

std::int64_t estimate_token_count(std::string_view text) {
  return static_cast<std::int64_t>((text.size() + 3) / 4);
}

io::Json completion_to_json(const Completion& c) {
  io::Json obj;
  obj["text"] = c.text;
  obj["token_count"] = c.token_count;
  obj["token_count_source"] = token_source_name(c.token_count_source);
  obj["latency_ms"] = c.latency_ms;
  return obj;
}

Completion completion_from_json(const io::Json& obj) {
  Completion c;
  c.text = obj.at("text").get<std::string>();
  c.token_count = obj.at("token_count").get<std::int64_t>();
  c.token_count_source =
      token_source_from_name(obj.at("token_count_source").get<std::string>());
  c.latency_ms = obj.value("latency_ms", static_cast<std::int64_t>(0));
  return c;
}

// ---------------------------------------------------------------------------
// Time sources

namespace {

class RealTimeSource : public TimeSource {
 public:
  std::chrono::steady_clock::time_point now() override {
    return std::chrono::steady_clock::now();
  }
  void sleep_until(std::chrono::steady_clock::time_point tp) override {
    std::this_thread::sleep_until(tp);
  }
};

}  // namespace

std::shared_ptr<TimeSource> real_time_source() {
  static auto instance = std::make_shared<RealTimeSource>();
  return instance;
}

std::chrono::steady_clock::time_point FakeTimeSource::now() {
  std::lock_guard<std::mutex> lock(mu_);
  return now_;
}

void FakeTimeSource::sleep_until(std::chrono::steady_clock::time_point tp) {
  std::lock_guard<std::mutex> lock(mu_);
  if (tp > now_) now_ = tp;
}

// ---------------------------------------------------------------------------
// Mock client

MockTeacherClient::MockTeacherClient(std::vector<MockFixture> fixtures,
                                     std::shared_ptr<TimeSource> time)
    : fixtures_(std::move(fixtures)),
      time_(time ? std::move(time) : real_time_source()) {}

Completion MockTeacherClient::complete(const CompletionRequest& req) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    ++calls_;
    times_.push_back(time_->now());
  }
  for (const auto& fixture : fixtures_) {
    if (!fixture.contains.empty() &&
        req.user_prompt.find(fixture.contains) == std::string::npos) {
      continue;
    }
    if (fixture.error == "transient") {
      throw TransientError("mock transient failure", 1);
    }
    if (fixture.error == "rate_limit") {
      throw RateLimitedError("mock rate limit");
    }
    if (fixture.error == "auth") {
      throw AuthError("mock auth failure");
    }
    Completion c;
    c.text = fixture.text;
    if (fixture.token_count.has_value()) {
      c.token_count = *fixture.token_count;
      c.token_count_source = TokenCountSource::provider;
    } else {
      c.token_count = estimate_token_count(c.text);
      c.token_count_source = TokenCountSource::estimated;
    }
    return c;
  }
  throw ConfigError("no mock fixture matches request (tag \"" +
                    req.request_tag + "\")");
}

int MockTeacherClient::call_count() const {
  std::lock_guard<std::mutex> lock(mu_);
  return calls_;
}

std::vector<std::chrono::steady_clock::time_point>
MockTeacherClient::call_times() const {
  std::lock_guard<std::mutex> lock(mu_);
  return times_;
}

std::vector<MockFixture> load_mock_fixtures(
    const std::filesystem::path& path) {
  io::Json root;
  try {
    root = io::Json::parse(io::read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("mock fixtures " + path.string() + ": " + e.what());
  }
  if (!root.is_object() || !root.contains("fixtures") ||
      !root["fixtures"].is_array()) {
    throw ConfigError("mock fixtures " + path.string() +
                      ": expected {\"fixtures\": [...]}");
  }
  std::vector<MockFixture> fixtures;
  for (const auto& entry : root["fixtures"]) {
    MockFixture f;
    f.contains = entry.value("contains", std::string());
    f.text = entry.value("text", std::string());
    if (entry.contains("token_count") && !entry["token_count"].is_null()) {
      f.token_count = entry["token_count"].get<std::int64_t>();
    }
    f.error = entry.value("error", std::string());
    if (!f.error.empty() && f.error != "transient" &&
        f.error != "rate_limit" && f.error != "auth") {
      throw ConfigError("mock fixtures: unknown error kind \"" + f.error +
                        "\"");
    }
    fixtures.push_back(std::move(f));
  }
  return fixtures;
}

// ---------------------------------------------------------------------------
// Retry decorator

namespace {

class RetryingClient : public TeacherClient {
 public:
  RetryingClient(ClientPtr inner, RetryPolicy policy,
                 std::shared_ptr<TimeSource> time)
      : inner_(std::move(inner)),
        policy_(policy),
        time_(time ? std::move(time) : real_time_source()) {}

  Completion complete(const CompletionRequest& req) override {
    std::string last_message;
    bool last_was_rate_limit = false;
    for (int attempt = 1; attempt <= policy_.max_attempts; ++attempt) {
      try {
        return inner_->complete(req);
      } catch (const AuthError&) {
        throw;
      } catch (const RequestError&) {
        throw;
      } catch (const RateLimitedError& e) {
        last_message = e.what();
        last_was_rate_limit = true;
      } catch (const ClientError& e) {
        last_message = e.what();
        last_was_rate_limit = false;
      }
      if (attempt < policy_.max_attempts) {
        auto delay = std::chrono::duration_cast<std::chrono::milliseconds>(
            policy_.base_delay * std::pow(policy_.factor, attempt - 1));
        time_->sleep_until(time_->now() + delay);
      }
    }
    if (last_was_rate_limit) {
      throw RateLimitedError("rate limited after " +
                             std::to_string(policy_.max_attempts) +
                             " attempts: " + last_message);
    }
    throw TransientError("giving up after " +
                             std::to_string(policy_.max_attempts) +
                             " attempts: " + last_message,
                         policy_.max_attempts);
  }

 private:
  ClientPtr inner_;
  RetryPolicy policy_;
  std::shared_ptr<TimeSource> time_;
};

}  // namespace

ClientPtr with_retries(ClientPtr inner, RetryPolicy policy,
                       std::shared_ptr<TimeSource> time) {
  return std::make_shared<RetryingClient>(std::move(inner), policy,
                                          std::move(time));
}

// ---------------------------------------------------------------------------
// Rate limiting decorator

namespace {

class RateLimitedClient : public TeacherClient {
 public:
  RateLimitedClient(ClientPtr inner, int max_inflight, int requests_per_minute,
                    std::shared_ptr<TimeSource> time)
      : inner_(std::move(inner)),
        max_inflight_(max_inflight),
        time_(time ? std::move(time) : real_time_source()) {
    if (max_inflight <= 0 || requests_per_minute <= 0) {
      throw ConfigError("rate limits must be positive");
    }
    interval_ = std::chrono::microseconds(60'000'000 / requests_per_minute);
  }

  Completion complete(const CompletionRequest& req) override {
    std::chrono::steady_clock::time_point slot;
    {
      std::unique_lock<std::mutex> lock(mu_);
      cv_.wait(lock, [&] { return inflight_ < max_inflight_; });
      ++inflight_;
      slot = std::max(time_->now(), next_start_);
      next_start_ = slot + interval_;
    }
    struct Release {
      RateLimitedClient* self;
      ~Release() {
        {
          std::lock_guard<std::mutex> lock(self->mu_);
          --self->inflight_;
        }
        self->cv_.notify_one();
      }
    } release{this};
    time_->sleep_until(slot);
    return inner_->complete(req);
  }

 private:
  ClientPtr inner_;
  int max_inflight_;
  std::chrono::microseconds interval_{0};
  std::shared_ptr<TimeSource> time_;
  std::mutex mu_;
  std::condition_variable cv_;
  int inflight_ = 0;
  std::chrono::steady_clock::time_point next_start_{};
};

}  // namespace

ClientPtr with_rate_limit(ClientPtr inner, int max_inflight,
                          int requests_per_minute,
                          std::shared_ptr<TimeSource> time) {
  return std::make_shared<RateLimitedClient>(
      std::move(inner), max_inflight, requests_per_minute, std::move(time));
}

// ---------------------------------------------------------------------------
// On-disk cache

CachingClient::CachingClient(ClientPtr inner, std::filesystem::path cache_dir)
    : inner_(std::move(inner)), dir_(std::move(cache_dir)) {}

Completion CachingClient::complete(const CompletionRequest& req) {
  std::string digest = request_digest(req);
  std::filesystem::path entry =
      dir_ / digest.substr(0, 2) / (digest + ".json");
  if (std::filesystem::exists(entry)) {
    try {
      Completion c = completion_from_json(io::Json::parse(io::read_file(entry)));
      c.from_cache = true;
      ++hits_;
      return c;
    } catch (const std::exception&) {
      // Corrupt entry: fall through and refetch, the write below repairs it.
    }
  }
  Completion c = inner_->complete(req);
  io::atomic_write_file(entry, completion_to_json(c).dump(2) + "\n");
  ++misses_;
  return c;
}

// ---------------------------------------------------------------------------
// HTTP client (OpenAI-style chat completions)

namespace {

class HttpTeacherClient : public TeacherClient {
 public:
  explicit HttpTeacherClient(EndpointConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.base_url.empty()) {
      throw ConfigError("teacher endpoint base_url is not configured");
    }
  }

  Completion complete(const CompletionRequest& req) override {
    const char* key = std::getenv(cfg_.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw AuthError("credential env var " + cfg_.api_key_env + " is not set");
    }

    io::Json body;
    body["model"] = req.model_id.empty() ? cfg_.model_id : req.model_id;
    body["messages"] = io::Json::array();
    if (!req.system_prompt.empty()) {
      body["messages"].push_back(
          {{"role", "system"}, {"content", req.system_prompt}});
    }
    body["messages"].push_back(
        {{"role", "user"}, {"content", req.user_prompt}});
    body["temperature"] = req.sampling.temperature;
    body["top_p"] = req.sampling.top_p;
    body["max_tokens"] = req.sampling.max_output_tokens;

    httplib::Client http(cfg_.base_url);
    http.set_connection_timeout(0, cfg_.timeout_ms * 1000LL);
    http.set_read_timeout(cfg_.timeout_ms / 1000, (cfg_.timeout_ms % 1000) * 1000);
    httplib::Headers headers{
        {"Authorization", std::string("Bearer ") + key},
    };

    auto started = std::chrono::steady_clock::now();
    auto res = http.Post(cfg_.path, headers, body.dump(), "application/json");
    auto latency = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();

    if (!res) {
      throw TransientError(
          "network error: " + httplib::to_string(res.error()), 1);
    }
    if (res->status == 401 || res->status == 403) {
      throw AuthError("authentication rejected (HTTP " +
                      std::to_string(res->status) + ")");
    }
    if (res->status == 429) {
      throw RateLimitedError("rate limited (HTTP 429)");
    }
    if (res->status >= 500 || res->status == 408) {
      throw TransientError("server error (HTTP " +
                               std::to_string(res->status) + ")",
                           1);
    }
    if (res->status != 200) {
      throw RequestError("request rejected (HTTP " +
                         std::to_string(res->status) + "): " + res->body);
    }

    io::Json parsed;
    try {
      parsed = io::Json::parse(res->body);
    } catch (const nlohmann::json::parse_error& e) {
      throw TransientError(std::string("unparseable response body: ") +
                               e.what(),
                           1);
    }
    Completion c;
    try {
      c.text = parsed.at("choices").at(0).at("message").at("content")
                   .get<std::string>();
    } catch (const std::exception& e) {
      throw TransientError(std::string("unexpected response shape: ") +
                               e.what(),
                           1);
    }
    if (parsed.contains("usage") &&
        parsed["usage"].contains("completion_tokens") &&
        parsed["usage"]["completion_tokens"].is_number()) {
      c.token_count = parsed["usage"]["completion_tokens"].get<std::int64_t>();
      c.token_count_source = TokenCountSource::provider;
    } else {
      c.token_count = estimate_token_count(c.text);
      c.token_count_source = TokenCountSource::estimated;
    }
    c.latency_ms = latency;
    return c;
  }

 private:
  EndpointConfig cfg_;
};

}  // namespace

ClientPtr make_http_client(const EndpointConfig& endpoint) {
  return std::make_shared<HttpTeacherClient>(endpoint);
}

}  // namespace ltkit::teacher
