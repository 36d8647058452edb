#include "memetic/session_log.hpp"

#include <sstream>

#include "memetic/error.hpp"

namespace memetic {

namespace {

constexpr std::pair<std::string_view, LogKind> kLogKinds[] = {
    {"control_set", LogKind::ControlSet},
    {"preset_selected", LogKind::PresetSelected},
    {"mode_selected", LogKind::ModeSelected},
    {"tile_placed", LogKind::TilePlaced},
    {"tile_removed", LogKind::TileRemoved},
    {"mixerless_set", LogKind::MixerlessSet},
    {"fader_moved", LogKind::FaderMoved},
    {"submitted", LogKind::Submitted},
    {"chain_compiled", LogKind::ChainCompiled},
    {"response_received", LogKind::ResponseReceived},
    {"error", LogKind::Error},
};

}  // namespace

std::string_view to_string(LogKind kind) noexcept {
  for (const auto& [name, k] : kLogKinds) {
    if (k == kind) return name;
  }
  return "?";
}

LogKind parse_log_kind(std::string_view text) {
  for (const auto& [name, k] : kLogKinds) {
    if (name == text) return k;
  }
  throw Error(ErrorKind::CorruptLog, "unknown log kind '" + std::string(text) + "'");
}

std::string SessionEvent::to_line() const {
  nlohmann::ordered_json j;
  j["seq"] = seq;
  j["ts"] = timestamp_ms;
  j["kind"] = to_string(kind);
  j["payload"] = payload;
  return j.dump();
}

std::vector<SessionEvent> parse_session_log(std::string_view text) {
  std::vector<SessionEvent> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::uint64_t last_seq = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto j = nlohmann::ordered_json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw CorruptLogError(last_seq + 1, "unparsable record");
    SessionEvent e;
    try {
      e.seq = j.at("seq").get<std::uint64_t>();
      e.timestamp_ms = j.at("ts").get<std::int64_t>();
      e.kind = parse_log_kind(j.at("kind").get<std::string>());
      e.payload = j.at("payload");
    } catch (const Error& err) {
      throw CorruptLogError(j.value("seq", last_seq + 1), err.detail());
    } catch (const nlohmann::json::exception& err) {
      throw CorruptLogError(j.value("seq", last_seq + 1), err.what());
    }
    if (e.seq <= last_seq) throw CorruptLogError(e.seq, "sequence numbers must strictly increase");
    last_seq = e.seq;
    out.push_back(std::move(e));
  }
  return out;
}

const SessionEvent& SessionLog::append(LogKind kind, nlohmann::ordered_json payload, std::int64_t timestamp_ms) {
  SessionEvent e{events_.empty() ? 1 : events_.back().seq + 1, timestamp_ms, kind, std::move(payload)};
  events_.push_back(std::move(e));
  if (sink_) {
    *sink_ << events_.back().to_line() << '\n';
    sink_->flush();
  }
  return events_.back();
}

std::string SessionLog::text() const {
  std::string out;
  for (const auto& e : events_) {
    out += e.to_line();
    out += '\n';
  }
  return out;
}

}  // namespace memetic
