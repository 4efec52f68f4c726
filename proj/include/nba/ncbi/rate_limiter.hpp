#pragma once

#include <cstddef>
#include <deque>
#include <memory>
#include <mutex>

#include "nba/common/clock.hpp"

namespace nba {

/// Sliding-log limiter: at most `cap` grants inside any window of length
/// `window`. A small guard is added to the window so that the jitter
/// between a grant and the socket write cannot push an observer's rolling
/// count over the cap.
class RateLimiter {
 public:
  RateLimiter(std::size_t cap, std::shared_ptr<Clock> clock, Millis window = Millis(1000), Millis guard = Millis(20));

  /// Blocks (through the clock) until a slot is free.
  void acquire();
  std::size_t cap() const { return cap_; }
  std::size_t granted() const;

 private:
  std::size_t cap_;
  std::shared_ptr<Clock> clock_;
  Millis window_;
  mutable std::mutex mu_;
  std::deque<std::int64_t> grants_;
  std::size_t total_ = 0;
};

/// NCBI policy: 3 requests/s anonymously, 10/s with an API key.
inline std::size_t default_ncbi_rate_cap(bool has_api_key) { return has_api_key ? 10 : 3; }

}  // namespace nba
