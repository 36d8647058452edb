#include "memetic/midi.hpp"

#include <nlohmann/json.hpp>

#include "memetic/error.hpp"

namespace memetic::midi {

namespace {

constexpr std::uint8_t kSysExStart = 0xF0;
constexpr std::uint8_t kSysExEnd = 0xF7;
constexpr std::uint8_t kRealTimeFirst = 0xF8;

// Data bytes that follow a status byte.
int data_length(std::uint8_t status) {
  switch (status & 0xF0) {
    case 0xC0:  // program change
    case 0xD0:  // channel pressure
      return 1;
    case 0xF0:
      switch (status) {
        case 0xF1: return 1;  // MTC quarter frame
        case 0xF2: return 2;  // song position
        case 0xF3: return 1;  // song select
        default: return 0;    // F4/F5 undefined, F6 tune request
      }
    default:
      return 2;
  }
}

}  // namespace

DecodeResult decode(std::span<const std::uint8_t> bytes) {
  DecodeResult out;
  std::uint8_t status = 0;  // status of the message being assembled; 0 = none
  std::uint8_t data[2] = {0, 0};
  int have = 0;
  bool in_sysex = false;

  for (std::uint8_t b : bytes) {
    if (b >= kRealTimeFirst) continue;

    if (b & 0x80) {
      if (in_sysex) {
        in_sysex = false;
        if (b == kSysExEnd) continue;
      }
      if (have > 0) ++out.malformed;  // message cut short by a new status
      have = 0;
      if (b < 0xF0) {
        status = b;
      } else if (b == kSysExStart) {
        in_sysex = true;
        status = 0;
      } else if (b == kSysExEnd) {
        ++out.malformed;  // EOX outside SysEx
        status = 0;
      } else {
        // System common clears running status.
        status = data_length(b) > 0 ? b : 0;
      }
      continue;
    }

    if (in_sysex) continue;
    if (status == 0) {
      ++out.malformed;
      continue;
    }
    data[have++] = b;
    if (have == data_length(status)) {
      if ((status & 0xF0) == 0xB0)
        out.events.push_back({static_cast<std::uint8_t>(status & 0x0F), data[0], data[1]});
      have = 0;
      if (status >= 0xF0) status = 0;
    }
  }

  if (in_sysex) {
    out.remainder.push_back(kSysExStart);
  } else if (status != 0) {
    out.remainder.push_back(status);
    out.remainder.insert(out.remainder.end(), data, data + have);
  }
  return out;
}

std::vector<ControlChange> Decoder::feed(std::span<const std::uint8_t> bytes) {
  pending_.insert(pending_.end(), bytes.begin(), bytes.end());
  auto r = decode(pending_);
  pending_ = std::move(r.remainder);
  malformed_ += r.malformed;
  return std::move(r.events);
}

// ---------------------------------------------------------------------------

Mapping::Mapping(std::vector<std::pair<std::pair<int, int>, std::string>> entries, const ControlSurface* surface) {
  for (auto& [key, id] : entries) {
    auto [channel, controller] = key;
    if (channel < 0 || channel > 15 || controller < 0 || controller > 127)
      throw Error(ErrorKind::ConfigError, "MIDI mapping key out of range for '" + id + "'");
    if (surface && !surface->find(id)) throw Error(ErrorKind::ConfigError, "MIDI mapping targets unknown control '" + id + "'");
    if (!entries_.emplace(key, std::move(id)).second)
      throw Error(ErrorKind::ConfigError, "duplicate MIDI mapping for channel " + std::to_string(channel) +
                                              " controller " + std::to_string(controller));
  }
}

Mapping Mapping::from_json(std::string_view text, const ControlSurface* surface) {
  std::vector<std::pair<std::pair<int, int>, std::string>> entries;
  try {
    auto j = nlohmann::json::parse(text);
    for (const auto& e : j.at("entries")) {
      entries.push_back({{e.at("channel").get<int>(), e.at("controller").get<int>()}, e.at("control").get<std::string>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("malformed MIDI mapping: ") + e.what());
  }
  return Mapping(std::move(entries), surface);
}

const std::string* Mapping::lookup(int channel, int controller) const noexcept {
  auto it = entries_.find({channel, controller});
  return it == entries_.end() ? nullptr : &it->second;
}

std::optional<SurfaceCommand> Adapter::map_event(const ControlChange& event) {
  const auto* id = mapping_.lookup(event.channel, event.controller);
  if (!id) {
    ++dropped_;
    return std::nullopt;
  }
  return SurfaceCommand{*id, event.value};
}

}  // namespace memetic::midi
