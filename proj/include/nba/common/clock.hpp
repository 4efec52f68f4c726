#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>

namespace nba {

using Millis = std::chrono::milliseconds;

/// Time source used everywhere a duration or a timestamp is taken, so tests
/// can run retry/poll/rate-limit logic without real waiting.
class Clock {
 public:
  virtual ~Clock() = default;

  /// Milliseconds since the Unix epoch (trace timestamps).
  virtual std::int64_t wall_ms() const = 0;
  /// Monotonic milliseconds (durations, rate windows).
  virtual std::int64_t monotonic_ms() const = 0;
  virtual void sleep_for(Millis d) = 0;
};

class SystemClock final : public Clock {
 public:
  std::int64_t wall_ms() const override;
  std::int64_t monotonic_ms() const override;
  void sleep_for(Millis d) override;
};

/// Clock that only moves when told to. `sleep_for` advances it instantly.
/// An optional auto-step makes every reading advance time, which keeps
/// trace durations non-zero yet reproducible.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(std::int64_t start_ms = 1'700'000'000'000, std::int64_t auto_step_ms = 0)
      : now_(start_ms), auto_step_(auto_step_ms) {}

  std::int64_t wall_ms() const override { return tick(); }
  std::int64_t monotonic_ms() const override { return tick(); }
  void sleep_for(Millis d) override {
    now_.fetch_add(d.count());
    slept_.fetch_add(d.count());
  }

  void advance(Millis d) { now_.fetch_add(d.count()); }
  std::int64_t total_slept_ms() const { return slept_.load(); }

 private:
  std::int64_t tick() const { return now_.fetch_add(auto_step_) + auto_step_; }

  mutable std::atomic<std::int64_t> now_;
  std::int64_t auto_step_;
  std::atomic<std::int64_t> slept_{0};
};

}  // namespace nba
