#include "nba/ncbi/cache.hpp"

#include <mutex>

namespace nba {

std::optional<ToolResponse> ResponseCache::get(const std::string& key) const {
  const auto now = clock_->monotonic_ms();
  std::shared_lock lock(mu_);
  auto it = slots_.find(key);
  if (it == slots_.end()) return std::nullopt;
  if (it->second.expires_at && now >= *it->second.expires_at) return std::nullopt;
  ToolResponse out = it->second.value;
  out.from_cache = true;
  return out;
}

void ResponseCache::put(const std::string& key, ToolResponse value, std::optional<Millis> ttl) {
  std::optional<std::int64_t> expires;
  if (ttl) expires = clock_->monotonic_ms() + ttl->count();
  value.from_cache = false;
  std::unique_lock lock(mu_);
  slots_.insert_or_assign(key, Slot{std::move(value), expires});
}

std::size_t ResponseCache::size() const {
  std::shared_lock lock(mu_);
  return slots_.size();
}

void ResponseCache::clear() {
  std::unique_lock lock(mu_);
  slots_.clear();
}

}  // namespace nba
