#include "nba/gateway/transcript.hpp"

#include <fstream>

#include "nba/common/hash.hpp"

namespace nba {

using nlohmann::json;

Transcript Transcript::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open transcript " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw SchemaError("transcript " + path.string() + ": " + e.what());
  }
  if (!j.is_object() || j.value("schema_version", 0) != 1 || !j.contains("entries") || !j["entries"].is_object())
    throw SchemaError("transcript " + path.string() + ": expected schema_version 1 with an entries object");
  Transcript t;
  for (const auto& [key, e] : j["entries"].items()) {
    if (!e.is_object() || !e.contains("kind") || !e.contains("response"))
      throw SchemaError("transcript " + path.string() + ": entry " + key + " lacks kind/response");
    t.entries_.emplace(key, Entry{e["kind"].get<std::string>(), e.value("model", ""), e["response"]});
  }
  return t;
}

void Transcript::save(const std::filesystem::path& path) const {
  json entries = json::object();
  {
    std::lock_guard lock(mu_);
    for (const auto& [key, e] : entries_)
      entries[key] = {{"kind", e.kind}, {"model", e.model}, {"response", e.response}};
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write transcript " + path.string());
  out << json{{"schema_version", 1}, {"entries", entries}}.dump(2) << '\n';
}

std::string Transcript::key_for(std::string_view kind, const json& request_body) {
  std::string material(kind);
  material += '\n';
  material += request_body.dump();
  return sha256_hex(material);
}

std::string Transcript::kind_of_url(std::string_view url) {
  if (url.ends_with("/chat/completions")) return "chat";
  if (url.ends_with("/embeddings")) return "embeddings";
  throw PreconditionError("not a chat-completions or embeddings URL: " + std::string(url));
}

std::optional<Transcript::Entry> Transcript::find(const std::string& key) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void Transcript::put(const std::string& key, Entry entry) {
  std::lock_guard lock(mu_);
  entries_[key] = std::move(entry);
}

void Transcript::merge(const Transcript& other) {
  if (&other == this) return;
  std::scoped_lock lock(mu_, other.mu_);
  for (const auto& [k, e] : other.entries_) entries_.try_emplace(k, e);
}

std::map<std::string, Transcript::Entry> Transcript::snapshot() const {
  std::lock_guard lock(mu_);
  return entries_;
}

std::size_t Transcript::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

namespace {

json parse_body(const HttpRequest& request) {
  try {
    return json::parse(request.body);
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("model request body is not JSON: ") + e.what());
  }
}

}  // namespace

HttpResponse TranscriptReplayTransport::send(const HttpRequest& request) {
  const auto kind = Transcript::kind_of_url(request.url);
  const json body = parse_body(request);
  auto entry = transcript_->find(Transcript::key_for(kind, body));
  if (!entry)
    throw FixtureMissing("no recorded " + kind + " response for model " + body.value("model", "?") +
                         " (request not in transcript)");
  return HttpResponse{200, entry->response.dump(), {}};
}

HttpResponse TranscriptRecordingTransport::send(const HttpRequest& request) {
  HttpResponse resp = inner_->send(request);
  if (resp.status >= 200 && resp.status < 300) {
    const auto kind = Transcript::kind_of_url(request.url);
    const json body = parse_body(request);
    json parsed;
    try {
      parsed = json::parse(resp.body);
    } catch (const json::exception&) {
      return resp;  // the gateway reports the malformed body
    }
    transcript_->put(Transcript::key_for(kind, body), {kind, body.value("model", ""), std::move(parsed)});
  }
  return resp;
}

}  // namespace nba
