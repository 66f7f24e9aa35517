// Copyright 2026 The ltkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Chat-completion client abstraction used by the distillation pipeline.
// Everything composes behind the TeacherClient interface:
//
//   caching(retrying(rate_limited(http)))   -- live campaigns
//   caching(mock)                           -- tests and --mock runs
//
// The whole test suite runs against the mock with zero network access.

#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ltkit/jsonl.hpp"

namespace ltkit::teacher {

struct Sampling {
  double temperature = 0.7;
  double top_p = 1.0;
  int max_output_tokens = 8192;

  bool operator==(const Sampling&) const = default;
};

struct CompletionRequest {
  std::string model_id;
  std::string system_prompt;
  std::string user_prompt;
  Sampling sampling;
  std::string request_tag;  // pipeline stage label, not part of the digest
  // Distinguishes repeated draws for the same prompt in k-sample rejection
  // loops; part of the digest so the cache keeps each draw separately.
  int sample_index = 0;
};

// Stable content digest of (model_id, system_prompt, user_prompt, sampling);
// the cache key.
std::string request_digest(const CompletionRequest& req);

enum class TokenCountSource { provider, estimated };

struct Completion {
  std::string text;
  std::int64_t token_count = 0;
  TokenCountSource token_count_source = TokenCountSource::estimated;
  std::int64_t latency_ms = 0;
  bool from_cache = false;
};

// Fallback when the provider does not report usage: ceil(bytes / 4).
std::int64_t estimate_token_count(std::string_view text);

class ClientError : public std::runtime_error {
 public:
  explicit ClientError(const std::string& msg) : std::runtime_error(msg) {}
};

// Authentication failures are never retried.
class AuthError : public ClientError {
 public:
  explicit AuthError(const std::string& msg) : ClientError(msg) {}
};

// Malformed / rejected request (4xx other than 408 and 429); never retried.
class RequestError : public ClientError {
 public:
  explicit RequestError(const std::string& msg) : ClientError(msg) {}
};

class RateLimitedError : public ClientError {
 public:
  explicit RateLimitedError(const std::string& msg) : ClientError(msg) {}
};

class TransientError : public ClientError {
 public:
  TransientError(const std::string& msg, int attempts)
      : ClientError(msg), attempts(attempts) {}
  int attempts = 1;
};

class TeacherClient {
 public:
  virtual ~TeacherClient() = default;
  virtual Completion complete(const CompletionRequest& req) = 0;
};

using ClientPtr = std::shared_ptr<TeacherClient>;

// Injectable clock so the rate limiter and retry backoff are testable
// without real sleeping.
class TimeSource {
 public:
  virtual ~TimeSource() = default;
  virtual std::chrono::steady_clock::time_point now() = 0;
  virtual void sleep_until(std::chrono::steady_clock::time_point tp) = 0;
  void sleep_for(std::chrono::milliseconds d) { sleep_until(now() + d); }
};

std::shared_ptr<TimeSource> real_time_source();

// Manually advanced clock for tests; sleep_until jumps the clock forward.
class FakeTimeSource : public TimeSource {
 public:
  std::chrono::steady_clock::time_point now() override;
  void sleep_until(std::chrono::steady_clock::time_point tp) override;

 private:
  std::mutex mu_;
  std::chrono::steady_clock::time_point now_{};
};

// ---------------------------------------------------------------------------
// Mock client

struct MockFixture {
  std::string contains;  // matched against user_prompt; "" matches everything
  std::string text;
  std::optional<std::int64_t> token_count;  // absent -> estimated
  std::string error;  // "", "transient", "rate_limit" or "auth"
};

// Deterministic fixture-driven client. The first fixture whose `contains`
// key is a substring of the user prompt wins; no match is a ConfigError.
// Every call is logged with its request and the time source's clock.
class MockTeacherClient : public TeacherClient {
 public:
  explicit MockTeacherClient(std::vector<MockFixture> fixtures,
                             std::shared_ptr<TimeSource> time = nullptr);

  Completion complete(const CompletionRequest& req) override;

  int call_count() const;
  std::vector<std::chrono::steady_clock::time_point> call_times() const;

 private:
  std::vector<MockFixture> fixtures_;
  std::shared_ptr<TimeSource> time_;
  mutable std::mutex mu_;
  int calls_ = 0;
  std::vector<std::chrono::steady_clock::time_point> times_;
};

// Fixture file: {"fixtures": [{"contains": ..., "text": ...,
// "token_count": int?, "error": str?}, ...]}
std::vector<MockFixture> load_mock_fixtures(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Decorators

struct RetryPolicy {
  std::chrono::milliseconds base_delay{1000};
  double factor = 2.0;
  int max_attempts = 5;
};

// Retries RateLimitedError / TransientError with exponential backoff;
// AuthError passes through untouched. The terminal error keeps the kind of
// the last failure and carries the attempt count.
ClientPtr with_retries(ClientPtr inner, RetryPolicy policy = {},
                       std::shared_ptr<TimeSource> time = nullptr);

// Caps concurrent in-flight requests and paces request starts so the
// sustained rate stays at or under requests_per_minute.
ClientPtr with_rate_limit(ClientPtr inner, int max_inflight,
                          int requests_per_minute,
                          std::shared_ptr<TimeSource> time = nullptr);

// On-disk response cache, content-addressed as
// cache_dir/<first-2-hex>/<digest>.json. Hits return byte-identical text
// with from_cache=true; writes are temp-then-rename.
class CachingClient : public TeacherClient {
 public:
  CachingClient(ClientPtr inner, std::filesystem::path cache_dir);

  Completion complete(const CompletionRequest& req) override;

  std::int64_t hits() const { return hits_; }
  std::int64_t misses() const { return misses_; }

 private:
  ClientPtr inner_;
  std::filesystem::path dir_;
  std::atomic<std::int64_t> hits_{0};
  std::atomic<std::int64_t> misses_{0};
};

// ---------------------------------------------------------------------------
// HTTP client

struct EndpointConfig {
  std::string base_url;                       // e.g. https://api.example.com
  std::string path = "/v1/chat/completions";  // chat-completions route
  std::string model_id;
  std::string api_key_env = "TEACHER_API_KEY";
  int timeout_ms = 60000;
};

// Minimal OpenAI-style chat-completions client. One attempt per call;
// compose with with_retries / with_rate_limit for policy.
ClientPtr make_http_client(const EndpointConfig& endpoint);

io::Json completion_to_json(const Completion& c);
Completion completion_from_json(const io::Json& obj);

}  // namespace ltkit::teacher
