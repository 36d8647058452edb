#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>

namespace memetic {

class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::int64_t now_ms() = 0;
};

/// Wall-clock milliseconds since the Unix epoch.
class SystemClock final : public Clock {
 public:
  std::int64_t now_ms() override {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
  }
};

/// Deterministic clock for headless sessions and tests: every read returns
/// the current value, then moves forward by `step`.
class LogicalClock final : public Clock {
 public:
  explicit LogicalClock(std::int64_t start = 0, std::int64_t step = 0) : now_(start), step_(step) {}
  std::int64_t now_ms() override { return now_.fetch_add(step_); }
  void advance(std::int64_t ms) { now_.fetch_add(ms); }

 private:
  std::atomic<std::int64_t> now_;
  std::int64_t step_;
};

}  // namespace memetic
