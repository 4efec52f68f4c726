#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace nba {

/// Directory of recorded NCBI response bodies for offline replay.
///
///   <dir>/manifest.json      {"schema_version":1,"entries":{key:{sha256,bytes,source_url}}}
///   <dir>/bodies/<h>.body    raw body, h = sha256(canonical key)
///   <dir>/index.log          append-only journal of captures not yet in the manifest
///
/// A capture that dies midway leaves its work in the journal; reopening the
/// store replays it, so a resumed capture ends with the same manifest as an
/// uninterrupted one. The manifest carries no timestamps and is sorted.
class FixtureStore {
 public:
  struct Record {
    std::string body;
    std::string source_url;
  };

  /// Creates the directory when missing.
  explicit FixtureStore(std::filesystem::path dir);
  ~FixtureStore();
  FixtureStore(const FixtureStore&) = delete;
  FixtureStore& operator=(const FixtureStore&) = delete;

  /// Reads the body from disk and checks its digest (SchemaError when the
  /// file was edited or is missing).
  std::optional<Record> find(const std::string& key) const;
  bool contains(const std::string& key) const;
  /// Writes the body and journals the entry. Re-putting a key overwrites.
  void put(const std::string& key, const std::string& body, const std::string& source_url);
  /// Folds the journal into manifest.json.
  void flush();

  std::size_t size() const;
  std::vector<std::string> keys() const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  struct Meta {
    std::string sha256;
    std::size_t bytes = 0;
    std::string source_url;
  };
  std::filesystem::path body_path(const std::string& key) const;
  void append_journal(const std::string& key, const Meta& meta);

  std::filesystem::path dir_;
  mutable std::mutex mu_;
  std::map<std::string, Meta> entries_;
  bool dirty_ = false;
};

}  // namespace nba
