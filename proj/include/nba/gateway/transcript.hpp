#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "nba/common/http.hpp"

namespace nba {

/// Recorded model-endpoint exchanges, keyed by the request they answer.
///
/// File layout:
///   {"schema_version": 1,
///    "entries": {"<sha256>": {"kind": "chat", "model": "...", "response": {...}}}}
///
/// The key is sha256(kind + "\n" + canonical request JSON), so any change to
/// a prompt, a model id or a sampling parameter is a miss rather than a
/// silently wrong replay.
class Transcript {
 public:
  struct Entry {
    std::string kind;  // chat | embeddings
    std::string model;
    nlohmann::json response;
  };

  Transcript() = default;
  Transcript(const Transcript& o) : entries_(o.snapshot()) {}
  Transcript(Transcript&& o) noexcept : entries_(std::move(o.entries_)) {}

  static Transcript load(const std::filesystem::path& path);
  /// Sorted keys, two-space indent, trailing newline.
  void save(const std::filesystem::path& path) const;

  static std::string key_for(std::string_view kind, const nlohmann::json& request_body);
  /// "chat" for .../chat/completions, "embeddings" for .../embeddings.
  static std::string kind_of_url(std::string_view url);

  std::optional<Entry> find(const std::string& key) const;
  void put(const std::string& key, Entry entry);
  /// Adds every entry of `other` not already present.
  void merge(const Transcript& other);
  std::size_t size() const;
  std::map<std::string, Entry> snapshot() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, Entry> entries_;
};

/// Answers model requests from a transcript. A miss throws FixtureMissing.
class TranscriptReplayTransport final : public HttpTransport {
 public:
  explicit TranscriptReplayTransport(std::shared_ptr<const Transcript> transcript)
      : transcript_(std::move(transcript)) {}
  HttpResponse send(const HttpRequest& request) override;

 private:
  std::shared_ptr<const Transcript> transcript_;
};

/// Forwards to a live endpoint and records every 2xx answer.
class TranscriptRecordingTransport final : public HttpTransport {
 public:
  TranscriptRecordingTransport(std::shared_ptr<HttpTransport> inner, std::shared_ptr<Transcript> transcript)
      : inner_(std::move(inner)), transcript_(std::move(transcript)) {}
  HttpResponse send(const HttpRequest& request) override;

 private:
  std::shared_ptr<HttpTransport> inner_;
  std::shared_ptr<Transcript> transcript_;
};

}  // namespace nba
