#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "memetic/config.hpp"
#include "memetic/engine.hpp"
#include "memetic/midi.hpp"

namespace memetic::testing {

using Rng = std::mt19937_64;

/// A continuous value biased towards poles, centres and bin edges, where
/// quantization bugs live.
double random_position(ControlKind kind, Rng& rng);

/// Every control set to a random legal value (selectors to a random detent).
ControlSurface random_surface(const MixerConfig& config, Rng& rng);

/// 1..max_words vocabulary words joined by single spaces.
std::string random_tiles(const Vocabulary& vocabulary, Rng& rng, int max_words = 6);

/// Brute-force bin membership: the k with edge_k <= v < edge_{k+1}, where
/// edge_k = low + (high - low) * k / bins; the last bin is closed, and values
/// outside the range belong to the nearest end bin.
std::size_t oracle_bin(double value, double low, double high, std::size_t bins);

/// Byte-at-a-time reference MIDI parser, written as a classic state machine.
class ReferenceMidiParser {
 public:
  void push(std::uint8_t byte);
  const std::vector<midi::ControlChange>& events() const noexcept { return events_; }

 private:
  std::uint8_t running_ = 0;
  int expected_ = 0;
  std::vector<std::uint8_t> data_;
  bool sysex_ = false;
  std::vector<midi::ControlChange> events_;
};

std::vector<midi::ControlChange> reference_decode(const std::vector<std::uint8_t>& bytes);

/// Fixed MIDI capture: control changes with and without running status,
/// interleaved real-time bytes, SysEx and other channel/system messages.
struct MidiCorpus {
  std::vector<std::uint8_t> bytes;
  std::vector<midi::ControlChange> expected;
  std::size_t messages = 0;
};
MidiCorpus midi_corpus();

/// Splits [0, n) into random contiguous chunk lengths (some empty).
std::vector<std::size_t> random_partition(std::size_t n, Rng& rng);

/// A surface sitting exactly on a personality preset with a mode selected,
/// everything else at power-on.
ControlSurface golden_surface(const MixerConfig& config, const std::string& preset, const std::string& mode);
/// The chain a golden case compiles to (tiles "ocean dream").
std::string golden_chain(const MixerConfig& config, const std::string& preset, const std::string& mode);
inline constexpr const char* kGoldenTiles = "ocean dream";

}  // namespace memetic::testing

namespace memetic::testing {

/// A random mix of legal and illegal commands, with submits sprinkled in.
std::vector<Command> random_commands(const MixerConfig& config, Rng& rng, int count);

struct LiveRun {
  std::string log_text;
  nlohmann::ordered_json final_state;
};
/// Drives an engine with asynchronous recall and stub completions the way the
/// console does: recall ticks are interleaved with later commands.
LiveRun run_live(const std::vector<Command>& commands, std::shared_ptr<const MixerConfig> config, Rng& rng);

}  // namespace memetic::testing
