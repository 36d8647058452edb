#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace memetic {

enum class LogKind {
  ControlSet,
  PresetSelected,
  ModeSelected,
  TilePlaced,
  TileRemoved,
  MixerlessSet,
  FaderMoved,
  Submitted,
  ChainCompiled,
  ResponseReceived,
  Error,
};

std::string_view to_string(LogKind kind) noexcept;
LogKind parse_log_kind(std::string_view text);

/// One line of the append-only session log.
struct SessionEvent {
  std::uint64_t seq = 0;
  std::int64_t timestamp_ms = 0;
  LogKind kind = LogKind::Error;
  nlohmann::ordered_json payload;

  // {"seq":N,"ts":T,"kind":"...","payload":{...}} with no trailing newline.
  std::string to_line() const;
};

/// Parses a JSONL log. Throws CorruptLogError naming the offending seq (or
/// the last good seq + 1 when the line itself is unreadable).
std::vector<SessionEvent> parse_session_log(std::string_view text);

class SessionLog {
 public:
  SessionLog() = default;

  /// Optional sink that receives every appended line, flushed per event.
  void set_sink(std::ostream* sink) { sink_ = sink; }

  const SessionEvent& append(LogKind kind, nlohmann::ordered_json payload, std::int64_t timestamp_ms);

  const std::vector<SessionEvent>& events() const noexcept { return events_; }
  std::size_t size() const noexcept { return events_.size(); }
  /// Whole log as JSONL text (one line per record, newline-terminated).
  std::string text() const;

 private:
  std::vector<SessionEvent> events_;
  std::ostream* sink_ = nullptr;
};

}  // namespace memetic
