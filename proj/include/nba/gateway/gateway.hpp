#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "nba/common/clock.hpp"
#include "nba/common/http.hpp"
#include "nba/common/log.hpp"
#include "nba/gateway/usage.hpp"

namespace nba {

/// 401/403 from the provider. Never retried.
class AuthError : public Error {
 public:
  using Error::Error;
};
/// 429 from the provider. Retried.
class RateLimited : public Error {
 public:
  using Error::Error;
};
/// Any other non-retryable HTTP status.
class ModelHttpError : public Error {
 public:
  ModelHttpError(int status, const std::string& what) : Error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};
/// 2xx whose body is not a chat-completions / embeddings response.
class ModelResponseError : public Error {
 public:
  using Error::Error;
};
class ExhaustedRetries : public Error {
 public:
  ExhaustedRetries(std::uint32_t attempts, const std::string& what) : Error(what), attempts_(attempts) {}
  std::uint32_t attempts() const { return attempts_; }

 private:
  std::uint32_t attempts_;
};

/// An OpenAI-compatible chat or embeddings endpoint.
struct ModelEndpoint {
  std::string name;      // config key, used in reports
  std::string base_url;  // e.g. https://api.openai.com/v1
  std::string model_id;
  std::string auth_env;  // environment variable holding the bearer token
  double temperature = 0.0;
  int max_output = 512;
  double chars_per_token = kDefaultCharsPerToken;

  /// Throws ConfigError on an empty base_url or negative temperature.
  void validate() const;
};

nlohmann::json to_json(const ModelEndpoint& e);
ModelEndpoint endpoint_from_json(const std::string& name, const nlohmann::json& j);

struct ChatMessage {
  std::string role;
  std::string content;
  bool operator==(const ChatMessage&) const = default;
};

struct ChatResult {
  std::string text;
  UsageMetrics usage;
};

struct EmbeddingResult {
  std::vector<double> vector;
  std::string model_id;
  UsageMetrics usage;  // zero chars and zero attempts on a cache hit
  bool from_cache = false;
};

struct RetryPolicy {
  std::uint32_t max_attempts = 5;
  Millis base_delay{500};
  double jitter = 1.0;  // extra random delay in [0, jitter * base_delay)
  std::uint64_t seed = 0x5eed;
};

/// Provider-agnostic access to chat completions and embeddings with retry,
/// usage accounting and an embedding cache. Shareable across threads.
class ModelGateway {
 public:
  ModelGateway(std::shared_ptr<HttpTransport> transport, std::shared_ptr<Clock> clock, RetryPolicy retry = {},
               std::shared_ptr<LogSink> log = nullptr);

  /// `purpose` only labels the log record.
  ChatResult chat_complete(const ModelEndpoint& endpoint, std::span<const ChatMessage> messages,
                           std::string_view purpose = {});
  EmbeddingResult embed(const ModelEndpoint& endpoint, std::string_view text);

  std::size_t embedding_cache_size() const;
  const RetryPolicy& retry_policy() const { return retry_; }

 private:
  struct Attempted {
    HttpResponse response;
    std::uint32_t attempts;
  };
  Attempted post_with_retry(const ModelEndpoint& endpoint, const std::string& path, const std::string& body);
  Millis backoff_delay(std::uint32_t attempt);
  void log_call(const std::string& op, const ModelEndpoint& endpoint, std::string_view purpose,
                const UsageMetrics& usage, const std::string& error);

  std::shared_ptr<HttpTransport> transport_;
  std::shared_ptr<Clock> clock_;
  RetryPolicy retry_;
  std::shared_ptr<LogSink> log_;

  std::mutex rng_mu_;
  std::mt19937_64 rng_;

  mutable std::shared_mutex cache_mu_;
  std::unordered_map<std::string, std::vector<double>> embedding_cache_;
  std::unordered_map<std::string, std::size_t> dimensions_;
};

}  // namespace nba
