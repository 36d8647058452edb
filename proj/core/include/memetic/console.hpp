#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>

#include "memetic/engine.hpp"

namespace memetic {

struct ConsoleOptions {
  std::ostream* log_sink = nullptr;  // receives each log line as it is appended
  bool real_time_recall = true;      // false: recall ticks run inside apply()
  RetryPolicy retry;
};

/// Serialized applier around an Engine: one writer, ordered fan-out to
/// subscribers, a recall ticker, and asynchronous completions whose results
/// re-enter through the same lock.
class Console {
 public:
  /// Receives one serialized event. Returning false unsubscribes (used to
  /// drop subscribers that cannot keep up).
  using Subscriber = std::function<bool(const std::string& message)>;

  Console(std::shared_ptr<const MixerConfig> config, std::shared_ptr<ChatBackend> backend, ConsoleOptions options = {},
          std::shared_ptr<Clock> clock = {});
  ~Console();

  Console(const Console&) = delete;
  Console& operator=(const Console&) = delete;

  /// Registers a subscriber and immediately sends it a state_changed event.
  std::uint64_t subscribe(Subscriber subscriber);
  void unsubscribe(std::uint64_t id);

  std::optional<ErrorKind> apply(const Command& command);
  /// Parses a wire Command; malformed text yields an error event to all
  /// subscribers and InvalidCommand.
  std::optional<ErrorKind> apply_message(std::string_view text);

  nlohmann::ordered_json state() const;
  std::string config_document() const;
  std::string log_text() const;

  /// Blocks until no completion is in flight and no recall is moving.
  bool wait_idle(std::chrono::milliseconds timeout);

 private:
  void publish_locked(const Outcome& outcome);
  void start_completion_locked(CompletionRequest request);
  void ticker_loop();

  std::shared_ptr<const MixerConfig> config_;
  Gateway gateway_;
  ConsoleOptions options_;

  mutable std::mutex mutex_;
  std::condition_variable changed_;
  Engine engine_;
  std::map<std::uint64_t, Subscriber> subscribers_;
  std::uint64_t next_subscriber_ = 1;
  bool stopping_ = false;

  std::thread ticker_;
  std::thread worker_;
};

}  // namespace memetic
