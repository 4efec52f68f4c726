#include "nba/ncbi/rate_limiter.hpp"

#include "nba/common/error.hpp"

namespace nba {

RateLimiter::RateLimiter(std::size_t cap, std::shared_ptr<Clock> clock, Millis window, Millis guard)
    : cap_(cap), clock_(std::move(clock)), window_(window + guard) {
  if (cap_ == 0) throw PreconditionError("rate cap must be at least 1");
  if (!clock_) throw PreconditionError("rate limiter needs a clock");
}

void RateLimiter::acquire() {
  for (;;) {
    Millis wait{0};
    {
      std::lock_guard lock(mu_);
      const auto now = clock_->monotonic_ms();
      while (!grants_.empty() && grants_.front() + window_.count() <= now) grants_.pop_front();
      if (grants_.size() < cap_) {
        grants_.push_back(now);
        ++total_;
        return;
      }
      wait = Millis(grants_.front() + window_.count() - now);
    }
    clock_->sleep_for(std::max(wait, Millis(1)));
  }
}

std::size_t RateLimiter::granted() const {
  std::lock_guard lock(mu_);
  return total_;
}

}  // namespace nba
