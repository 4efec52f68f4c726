#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "nba/common/http.hpp"

namespace nba::sandbox {

/// Signed feature hashing of character trigrams (FNV-1a), L2-normalized.
std::vector<double> trigram_embedding(std::string_view text, std::size_t dimension = 256);

/// A rule-based stand-in for an OpenAI-compatible small model. It reads the
/// "Role: ..." line opening each system prompt and answers the way a
/// competent instruction-following model would for that role. Without a
/// role (or with the direct role) it has no tools and guesses.
class MockModel {
 public:
  /// `/chat/completions` and `/embeddings` bodies in, response bodies out.
  /// Throws SchemaError on a malformed request.
  nlohmann::json chat(const nlohmann::json& request) const;
  nlohmann::json embeddings(const nlohmann::json& request) const;

  std::string respond(const std::string& system, const std::string& user) const;
  HttpResponse handle(const HttpRequest& request) const;
};

class MockModelTransport final : public HttpTransport {
 public:
  explicit MockModelTransport(std::shared_ptr<const MockModel> model) : model_(std::move(model)) {}
  HttpResponse send(const HttpRequest& request) override;
  std::size_t requests() const { return requests_.load(); }

 private:
  std::shared_ptr<const MockModel> model_;
  std::atomic<std::size_t> requests_{0};
};

}  // namespace nba::sandbox
