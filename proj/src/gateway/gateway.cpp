#include "nba/gateway/gateway.hpp"

#include <cstdlib>

#include "nba/common/text.hpp"

namespace nba {

using nlohmann::json;

void ModelEndpoint::validate() const {
  if (base_url.empty()) throw ConfigError("model endpoint '" + name + "': base_url is empty");
  if (model_id.empty()) throw ConfigError("model endpoint '" + name + "': model_id is empty");
  if (!(temperature >= 0.0)) throw ConfigError("model endpoint '" + name + "': temperature must be >= 0");
  if (!(chars_per_token > 0.0)) throw ConfigError("model endpoint '" + name + "': chars_per_token must be > 0");
  if (max_output <= 0) throw ConfigError("model endpoint '" + name + "': max_output must be positive");
}

json to_json(const ModelEndpoint& e) {
  return {{"base_url", e.base_url},       {"model_id", e.model_id},     {"auth_env", e.auth_env},
          {"temperature", e.temperature}, {"max_output", e.max_output}, {"chars_per_token", e.chars_per_token}};
}

ModelEndpoint endpoint_from_json(const std::string& name, const json& j) {
  if (!j.is_object()) throw ConfigError("model endpoint '" + name + "' must be an object");
  ModelEndpoint e;
  e.name = name;
  try {
    e.base_url = j.at("base_url").get<std::string>();
    e.model_id = j.value("model_id", name);
    e.auth_env = j.value("auth_env", std::string{});
    e.temperature = j.value("temperature", 0.0);
    e.max_output = j.value("max_output", 512);
    e.chars_per_token = j.value("chars_per_token", kDefaultCharsPerToken);
  } catch (const json::exception& ex) {
    throw ConfigError("model endpoint '" + name + "': " + ex.what());
  }
  e.validate();
  return e;
}

ModelGateway::ModelGateway(std::shared_ptr<HttpTransport> transport, std::shared_ptr<Clock> clock, RetryPolicy retry,
                           std::shared_ptr<LogSink> log)
    : transport_(std::move(transport)),
      clock_(std::move(clock)),
      retry_(retry),
      log_(log ? std::move(log) : std::make_shared<NullLogSink>()),
      rng_(retry.seed) {
  if (!transport_ || !clock_) throw PreconditionError("gateway needs a transport and a clock");
  if (retry_.max_attempts == 0) throw PreconditionError("retry policy needs at least one attempt");
}

Millis ModelGateway::backoff_delay(std::uint32_t attempt) {
  const auto base = retry_.base_delay.count();
  const auto exp = base * (std::int64_t{1} << std::min<std::uint32_t>(attempt - 1, 20));
  std::int64_t jitter = 0;
  if (retry_.jitter > 0 && base > 0) {
    std::lock_guard lock(rng_mu_);
    jitter = static_cast<std::int64_t>(rng_() % static_cast<std::uint64_t>(std::max<double>(1, retry_.jitter * base)));
  }
  return Millis(exp + jitter);
}

ModelGateway::Attempted ModelGateway::post_with_retry(const ModelEndpoint& endpoint, const std::string& path,
                                                      const std::string& body) {
  HttpRequest req;
  req.method = "POST";
  std::string base = endpoint.base_url;
  while (!base.empty() && base.back() == '/') base.pop_back();
  req.url = base + path;
  req.body = body;
  req.content_type = "application/json";
  req.timeout = Millis(120'000);
  if (!endpoint.auth_env.empty()) {
    if (const char* token = std::getenv(endpoint.auth_env.c_str()); token && *token)
      req.headers["Authorization"] = std::string("Bearer ") + token;
  }

  std::string last_error;
  for (std::uint32_t attempt = 1; attempt <= retry_.max_attempts; ++attempt) {
    Millis wait{0};
    try {
      HttpResponse resp = transport_->send(req);
      if (resp.status >= 200 && resp.status < 300) return {std::move(resp), attempt};
      const std::string what = "model endpoint '" + endpoint.name + "' returned HTTP " + std::to_string(resp.status);
      if (resp.status == 401 || resp.status == 403) throw AuthError(what);
      if (resp.status == 429) {
        last_error = RateLimited(what).what();
        if (auto it = resp.headers.find("Retry-After"); it != resp.headers.end()) {
          char* end = nullptr;
          const long secs = std::strtol(it->second.c_str(), &end, 10);
          if (end != it->second.c_str() && secs > 0) wait = Millis(secs * 1000);
        }
      } else if (resp.status == 408 || resp.status >= 500) {
        last_error = what;
      } else {
        throw ModelHttpError(resp.status, what);
      }
    } catch (const TransportError& e) {
      last_error = e.what();
    }
    if (attempt == retry_.max_attempts) break;
    clock_->sleep_for(std::max(wait, backoff_delay(attempt)));
  }
  throw ExhaustedRetries(retry_.max_attempts, "gave up after " + std::to_string(retry_.max_attempts) +
                                                  " attempts: " + last_error);
}

void ModelGateway::log_call(const std::string& op, const ModelEndpoint& endpoint, std::string_view purpose,
                            const UsageMetrics& usage, const std::string& error) {
  json rec = {{"event", "model_call"},
              {"op", op},
              {"endpoint", endpoint.name},
              {"model", endpoint.model_id},
              {"purpose", std::string(purpose)},
              {"usage", to_json(usage)},
              {"status", error.empty() ? "ok" : "error"},
              {"rss_kb", resident_memory_kb()}};
  if (!error.empty()) rec["error"] = error;
  log_->write(rec);
}

ChatResult ModelGateway::chat_complete(const ModelEndpoint& endpoint, std::span<const ChatMessage> messages,
                                       std::string_view purpose) {
  if (messages.empty()) throw PreconditionError("chat_complete: message list is empty");
  endpoint.validate();

  json msgs = json::array();
  std::uint64_t chars_in = 0;
  for (const auto& m : messages) {
    msgs.push_back({{"role", m.role}, {"content", m.content}});
    chars_in += text::utf8_length(m.content);
  }
  const json body = {{"model", endpoint.model_id},
                     {"messages", msgs},
                     {"temperature", endpoint.temperature},
                     {"max_tokens", endpoint.max_output},
                     {"stream", false}};

  const auto start = clock_->monotonic_ms();
  try {
    auto [resp, attempts] = post_with_retry(endpoint, "/chat/completions", body.dump());
    std::string content;
    try {
      const json j = json::parse(resp.body);
      const auto& msg = j.at("choices").at(0).at("message");
      content = msg.at("content").is_null() ? std::string{} : msg.at("content").get<std::string>();
    } catch (const json::exception& e) {
      throw ModelResponseError("malformed chat-completions response from '" + endpoint.name + "': " + e.what());
    }
    ChatResult out{content, make_usage(chars_in, text::utf8_length(content), endpoint.chars_per_token,
                                       clock_->monotonic_ms() - start, attempts)};
    log_call("chat", endpoint, purpose, out.usage, {});
    return out;
  } catch (const Error& e) {
    UsageMetrics failed;
    failed.elapsed_ms = clock_->monotonic_ms() - start;
    if (auto* ex = dynamic_cast<const ExhaustedRetries*>(&e)) failed.attempts = ex->attempts();
    log_call("chat", endpoint, purpose, failed, e.what());
    throw;
  }
}

EmbeddingResult ModelGateway::embed(const ModelEndpoint& endpoint, std::string_view text_in) {
  if (text_in.empty()) throw PreconditionError("embed: text is empty");
  endpoint.validate();
  const std::string key = endpoint.model_id + '\x1f' + std::string(text_in);
  {
    std::shared_lock lock(cache_mu_);
    if (auto it = embedding_cache_.find(key); it != embedding_cache_.end()) {
      EmbeddingResult hit{it->second, endpoint.model_id, {}, true};
      log_call("embed", endpoint, "cache_hit", hit.usage, {});
      return hit;
    }
  }

  const json body = {{"model", endpoint.model_id}, {"input", std::string(text_in)}};
  const auto start = clock_->monotonic_ms();
  try {
    auto [resp, attempts] = post_with_retry(endpoint, "/embeddings", body.dump());
    std::vector<double> vec;
    try {
      const json j = json::parse(resp.body);
      vec = j.at("data").at(0).at("embedding").get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw ModelResponseError("malformed embeddings response from '" + endpoint.name + "': " + e.what());
    }
    if (vec.empty()) throw ModelResponseError("empty embedding from '" + endpoint.name + "'");
    {
      std::unique_lock lock(cache_mu_);
      auto [dim, inserted] = dimensions_.try_emplace(endpoint.model_id, vec.size());
      if (!inserted && dim->second != vec.size())
        throw ModelResponseError("embedding dimension changed for model " + endpoint.model_id);
      embedding_cache_.emplace(key, vec);
    }
    EmbeddingResult out{std::move(vec), endpoint.model_id,
                        make_usage(text::utf8_length(text_in), 0, endpoint.chars_per_token,
                                   clock_->monotonic_ms() - start, attempts),
                        false};
    log_call("embed", endpoint, {}, out.usage, {});
    return out;
  } catch (const Error& e) {
    UsageMetrics failed;
    failed.elapsed_ms = clock_->monotonic_ms() - start;
    log_call("embed", endpoint, {}, failed, e.what());
    throw;
  }
}

std::size_t ModelGateway::embedding_cache_size() const {
  std::shared_lock lock(cache_mu_);
  return embedding_cache_.size();
}

}  // namespace nba
