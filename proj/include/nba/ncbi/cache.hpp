#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>

#include "nba/common/clock.hpp"

namespace nba {

struct ToolResponse {
  std::string body;
  std::int64_t fetched_at = 0;  // wall ms
  bool from_cache = false;
  bool from_fixture = false;
  std::string source_url;  // credentials stripped
};

/// In-memory TTL cache of NCBI responses, keyed by canonical request.
/// Safe under concurrent readers and writers.
class ResponseCache {
 public:
  explicit ResponseCache(std::shared_ptr<Clock> clock) : clock_(std::move(clock)) {}

  /// Most recent unexpired value, with from_cache set.
  std::optional<ToolResponse> get(const std::string& key) const;
  /// Overwrites. No ttl means the entry never expires.
  void put(const std::string& key, ToolResponse value, std::optional<Millis> ttl);

  std::size_t size() const;
  void clear();

 private:
  struct Slot {
    ToolResponse value;
    std::optional<std::int64_t> expires_at;  // monotonic ms
  };
  std::shared_ptr<Clock> clock_;
  mutable std::shared_mutex mu_;
  std::map<std::string, Slot, std::less<>> slots_;
};

}  // namespace nba
