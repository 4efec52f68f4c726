#include "nba/ncbi/fixture_store.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nba/common/error.hpp"
#include "nba/common/hash.hpp"

namespace nba {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw SchemaError("fixture body missing: " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const fs::path& p, const std::string& data) {
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << data;
  }
  fs::rename(tmp, p);
}

}  // namespace

FixtureStore::FixtureStore(fs::path dir) : dir_(std::move(dir)) {
  fs::create_directories(dir_ / "bodies");
  if (fs::exists(dir_ / "manifest.json")) {
    json m;
    try {
      m = json::parse(read_file(dir_ / "manifest.json"));
    } catch (const json::exception& e) {
      throw SchemaError("fixture manifest " + (dir_ / "manifest.json").string() + ": " + e.what());
    }
    if (m.value("schema_version", 0) != 1 || !m.contains("entries"))
      throw SchemaError("fixture manifest " + (dir_ / "manifest.json").string() + ": unsupported schema");
    for (const auto& [key, e] : m["entries"].items())
      entries_[key] = Meta{e.at("sha256").get<std::string>(), e.at("bytes").get<std::size_t>(),
                           e.value("source_url", std::string{})};
  }
  if (std::ifstream journal(dir_ / "index.log"); journal) {
    std::string line;
    while (std::getline(journal, line)) {
      if (line.empty()) continue;
      json e;
      try {
        e = json::parse(line);
      } catch (const json::exception&) {
        break;  // torn final line of an interrupted capture
      }
      entries_[e.at("key").get<std::string>()] =
          Meta{e.at("sha256").get<std::string>(), e.at("bytes").get<std::size_t>(), e.value("source_url", "")};
      dirty_ = true;
    }
  }
}

FixtureStore::~FixtureStore() {
  try {
    flush();
  } catch (...) {
  }
}

fs::path FixtureStore::body_path(const std::string& key) const { return dir_ / "bodies" / (sha256_hex(key) + ".body"); }

std::optional<FixtureStore::Record> FixtureStore::find(const std::string& key) const {
  Meta meta;
  {
    std::lock_guard lock(mu_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    meta = it->second;
  }
  std::string body = read_file(body_path(key));
  if (body.size() != meta.bytes || sha256_hex(body) != meta.sha256)
    throw SchemaError("fixture body for '" + key + "' does not match its manifest digest");
  return Record{std::move(body), meta.source_url};
}

bool FixtureStore::contains(const std::string& key) const {
  std::lock_guard lock(mu_);
  return entries_.contains(key);
}

void FixtureStore::append_journal(const std::string& key, const Meta& meta) {
  std::ofstream out(dir_ / "index.log", std::ios::binary | std::ios::app);
  if (!out) throw ConfigError("cannot append to " + (dir_ / "index.log").string());
  out << json{{"key", key}, {"sha256", meta.sha256}, {"bytes", meta.bytes}, {"source_url", meta.source_url}}.dump()
      << '\n';
  out.flush();
}

void FixtureStore::put(const std::string& key, const std::string& body, const std::string& source_url) {
  Meta meta{sha256_hex(body), body.size(), source_url};
  std::lock_guard lock(mu_);
  write_atomic(body_path(key), body);
  append_journal(key, meta);
  entries_[key] = std::move(meta);
  dirty_ = true;
}

void FixtureStore::flush() {
  std::lock_guard lock(mu_);
  if (!dirty_ && fs::exists(dir_ / "manifest.json")) return;
  json entries = json::object();
  for (const auto& [key, m] : entries_)
    entries[key] = {{"sha256", m.sha256}, {"bytes", m.bytes}, {"source_url", m.source_url}};
  write_atomic(dir_ / "manifest.json", json{{"schema_version", 1}, {"entries", entries}}.dump(1) + "\n");
  fs::remove(dir_ / "index.log");
  dirty_ = false;
}

std::size_t FixtureStore::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

std::vector<std::string> FixtureStore::keys() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [k, _] : entries_) out.push_back(k);
  return out;
}

}  // namespace nba
