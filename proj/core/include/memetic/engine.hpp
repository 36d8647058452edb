#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "memetic/clock.hpp"
#include "memetic/commands.hpp"
#include "memetic/config.hpp"
#include "memetic/error.hpp"
#include "memetic/llm_gateway.hpp"
#include "memetic/session_log.hpp"

namespace memetic {

/// A server -> client event: {"kind": "...", ...}.
struct Broadcast {
  std::string kind;  // state_changed | fader_moved | response_ready | error
  nlohmann::ordered_json body;

  std::string to_message() const;
};

struct Outcome {
  std::vector<Broadcast> broadcasts;
  // Set by a successful submit: the caller runs it and reports back through
  // Engine::complete / Engine::fail_completion.
  std::optional<CompletionRequest> dispatch;
  // First error raised while applying, if any.
  std::optional<ErrorKind> error;

  void append(Outcome&& other);
};

struct EngineOptions {
  // Run every recall tick inside apply() instead of waiting for
  // advance_recall() calls. Used by headless sessions.
  bool synchronous_recall = false;
};

/// The console's state machine. Owns the surface, the slate and the session
/// log; every mutation goes through apply(). Not thread-safe: callers
/// serialize access (see Console).
class Engine {
 public:
  Engine(std::shared_ptr<const MixerConfig> config, std::shared_ptr<Clock> clock, EngineOptions options = {});

  Outcome apply(const Command& command);

  /// Advances an in-flight recall by one tick. No-op when idle.
  Outcome advance_recall();

  Outcome complete(const CompletionResult& result);
  Outcome fail_completion(const Error& error);

  bool busy() const noexcept { return busy_; }
  bool recall_active() const noexcept { return recall_.has_value(); }
  bool mixerless() const noexcept { return mixerless_; }
  const ControlSurface& surface() const noexcept { return surface_; }
  const Board& board() const noexcept { return board_; }
  const SessionLog& log() const noexcept { return log_; }
  SessionLog& log() noexcept { return log_; }
  const MixerConfig& config() const noexcept { return *config_; }
  const std::optional<std::string>& last_response() const noexcept { return last_response_; }

  /// Full state document served on GET /state and carried by state_changed.
  nlohmann::ordered_json state_document() const;

 private:
  struct ActiveRecall {
    RecallPlan plan;
    std::set<std::string> released;  // faders moved by hand mid-recall
    int ticks_done = 0;
  };

  Outcome apply_checked(const Command& command);
  Outcome set_control(const cmd::SetControl& c);
  Outcome select_preset(const std::string& id);
  Outcome select_mode(const std::string& id);
  Outcome place_tile(const cmd::PlaceTile& c);
  Outcome remove_tile(const cmd::RemoveTile& c);
  Outcome submit();
  Outcome set_mixerless(bool value);
  Outcome run_recall_to_end();

  Broadcast state_changed() const;
  void record(LogKind kind, nlohmann::ordered_json payload);
  std::string input_text() const;

  std::shared_ptr<const MixerConfig> config_;
  std::shared_ptr<Clock> clock_;
  EngineOptions options_;
  ControlSurface surface_;
  Board board_;
  SessionLog log_;
  std::optional<ActiveRecall> recall_;
  bool busy_ = false;
  bool mixerless_ = false;
  std::string pending_input_;
  std::optional<std::string> last_input_;
  std::optional<std::string> last_response_;
};

}  // namespace memetic
