#include "memetic/console.hpp"

namespace memetic {

Console::Console(std::shared_ptr<const MixerConfig> config, std::shared_ptr<ChatBackend> backend,
                 ConsoleOptions options, std::shared_ptr<Clock> clock)
    : config_(config),
      gateway_(std::move(backend), options.retry),
      options_(options),
      engine_(config, clock ? clock : std::make_shared<SystemClock>(),
              EngineOptions{.synchronous_recall = !options.real_time_recall}) {
  engine_.log().set_sink(options_.log_sink);
  if (options_.real_time_recall) ticker_ = std::thread([this] { ticker_loop(); });
}

Console::~Console() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  changed_.notify_all();
  if (ticker_.joinable()) ticker_.join();
  if (worker_.joinable()) worker_.join();
}

std::uint64_t Console::subscribe(Subscriber subscriber) {
  std::lock_guard lock(mutex_);
  auto id = next_subscriber_++;
  Broadcast initial{"state_changed", {{"state", engine_.state_document()}}};
  if (subscriber(initial.to_message())) subscribers_.emplace(id, std::move(subscriber));
  return id;
}

void Console::unsubscribe(std::uint64_t id) {
  std::lock_guard lock(mutex_);
  subscribers_.erase(id);
}

void Console::publish_locked(const Outcome& outcome) {
  for (const auto& b : outcome.broadcasts) {
    const auto message = b.to_message();
    for (auto it = subscribers_.begin(); it != subscribers_.end();) {
      it = it->second(message) ? std::next(it) : subscribers_.erase(it);
    }
  }
  changed_.notify_all();
}

std::optional<ErrorKind> Console::apply(const Command& command) {
  std::lock_guard lock(mutex_);
  auto outcome = engine_.apply(command);
  publish_locked(outcome);
  if (outcome.dispatch) start_completion_locked(std::move(*outcome.dispatch));
  return outcome.error;
}

std::optional<ErrorKind> Console::apply_message(std::string_view text) {
  Command command;
  try {
    command = parse_command(text);
  } catch (const Error& e) {
    std::lock_guard lock(mutex_);
    Outcome o;
    o.broadcasts.push_back({"error", {{"error", e.name()}, {"message", e.detail()}}});
    publish_locked(o);
    return e.kind();
  }
  return apply(command);
}

void Console::start_completion_locked(CompletionRequest request) {
  // Busy guarantees the previous worker has finished its engine update.
  if (worker_.joinable()) worker_.join();
  worker_ = std::thread([this, request = std::move(request)] {
    Outcome done;
    std::optional<CompletionResult> result;
    std::optional<Error> failure;
    try {
      result = gateway_.complete(request);
    } catch (const Error& e) {
      failure = e;
    } catch (const std::exception& e) {
      failure = Error(ErrorKind::BackendError, e.what());
    }
    std::lock_guard lock(mutex_);
    done = result ? engine_.complete(*result) : engine_.fail_completion(*failure);
    publish_locked(done);
  });
}

void Console::ticker_loop() {
  const auto tick = std::chrono::duration<double, std::milli>(config_->presets.recall().tick_ms);
  std::unique_lock lock(mutex_);
  while (!stopping_) {
    changed_.wait(lock, [&] { return stopping_ || engine_.recall_active(); });
    if (stopping_) break;
    auto due = std::chrono::steady_clock::now() + std::chrono::duration_cast<std::chrono::steady_clock::duration>(tick);
    if (changed_.wait_until(lock, due, [&] { return stopping_; })) break;
    publish_locked(engine_.advance_recall());
  }
}

nlohmann::ordered_json Console::state() const {
  std::lock_guard lock(mutex_);
  return engine_.state_document();
}

std::string Console::config_document() const { return config_->document.dump(); }

std::string Console::log_text() const {
  std::lock_guard lock(mutex_);
  return engine_.log().text();
}

bool Console::wait_idle(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mutex_);
  return changed_.wait_for(lock, timeout, [&] { return !engine_.busy() && !engine_.recall_active(); });
}

}  // namespace memetic
