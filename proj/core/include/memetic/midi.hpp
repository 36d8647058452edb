#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "memetic/control_surface.hpp"

namespace memetic::midi {

/// A MIDI 1.0 control-change message.
struct ControlChange {
  std::uint8_t channel;     // 0-15
  std::uint8_t controller;  // 0-127
  std::uint8_t value;       // 0-127
  friend bool operator==(const ControlChange&, const ControlChange&) = default;
};

struct DecodeResult {
  std::vector<ControlChange> events;
  // Bytes to prepend to the next chunk. Starts with the running status byte
  // when one is active, so decode(remainder ++ next) resumes exactly.
  std::vector<std::uint8_t> remainder;
  // Bytes or messages dropped as malformed (stray data, truncated messages).
  std::size_t malformed = 0;
};

/// Stateless decode of a raw octet stream. Only control changes are emitted;
/// other channel messages, system common and SysEx are consumed and ignored.
/// Real-time bytes (0xF8-0xFF) may appear anywhere and are skipped.
DecodeResult decode(std::span<const std::uint8_t> bytes);

/// Streaming wrapper: one instance per input port.
class Decoder {
 public:
  std::vector<ControlChange> feed(std::span<const std::uint8_t> bytes);
  std::size_t malformed() const noexcept { return malformed_; }

 private:
  std::vector<std::uint8_t> pending_;
  std::size_t malformed_ = 0;
};

/// A surface command produced from a mapped control change.
struct SurfaceCommand {
  std::string control_id;
  int raw7;
};

/// (channel, controller) -> control id.
class Mapping {
 public:
  Mapping() = default;
  /// Throws ConfigError on duplicate keys, out-of-range keys, or targets
  /// missing from `surface` (when given).
  Mapping(std::vector<std::pair<std::pair<int, int>, std::string>> entries, const ControlSurface* surface = nullptr);

  static Mapping from_json(std::string_view text, const ControlSurface* surface = nullptr);

  const std::string* lookup(int channel, int controller) const noexcept;
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::map<std::pair<int, int>, std::string> entries_;
};

/// Routes events through a mapping and counts the ones that did not map.
class Adapter {
 public:
  explicit Adapter(Mapping mapping) : mapping_(std::move(mapping)) {}

  std::optional<SurfaceCommand> map_event(const ControlChange& event);
  std::size_t dropped() const noexcept { return dropped_; }

 private:
  Mapping mapping_;
  std::size_t dropped_ = 0;
};

}  // namespace memetic::midi
