#include "support.hpp"

#include <algorithm>
#include <cmath>

namespace memetic::testing {

double random_position(ControlKind kind, Rng& rng) {
  const double low = is_bipolar(kind) ? -1.0 : 0.0;
  const double high = 1.0;
  std::uniform_int_distribution<int> pick(0, 9);
  switch (pick(rng)) {
    case 0: return low;
    case 1: return high;
    case 2: return is_bipolar(kind) ? 0.0 : 0.5;
    case 3: {
      std::uniform_int_distribution<int> k(0, 5);
      return low + (high - low) * k(rng) / 5.0;
    }
    default: return std::uniform_real_distribution<double>(low, high)(rng);
  }
}

ControlSurface random_surface(const MixerConfig& config, Rng& rng) {
  auto surface = config.make_surface();
  for (const auto& spec : surface.specs()) {
    if (spec.kind == ControlKind::SelectorKnob) {
      std::uniform_int_distribution<int> d(0, spec.positions() - 1);
      surface.set(spec.id, d(rng));
    } else {
      surface.set(spec.id, random_position(spec.kind, rng));
    }
  }
  return surface;
}

std::string random_tiles(const Vocabulary& vocabulary, Rng& rng, int max_words) {
  std::uniform_int_distribution<int> count(1, max_words);
  std::uniform_int_distribution<std::size_t> word(0, vocabulary.size() - 1);
  std::string out;
  for (int i = count(rng); i > 0; --i) {
    if (!out.empty()) out += ' ';
    out += vocabulary.words()[word(rng)];
  }
  return out;
}

std::size_t oracle_bin(double value, double low, double high, std::size_t bins) {
  if (value <= low) return 0;
  if (value >= high) return bins - 1;
  std::size_t found = bins;
  for (std::size_t k = 0; k < bins; ++k) {
    const double lo = low + (high - low) * static_cast<double>(k) / static_cast<double>(bins);
    const double hi = k + 1 == bins ? high : low + (high - low) * static_cast<double>(k + 1) / static_cast<double>(bins);
    const bool inside = value >= lo && (k + 1 == bins ? value <= hi : value < hi);
    if (inside) {
      if (found != bins) return bins;  // overlapping bins: oracle failure
      found = k;
    }
  }
  return found;
}

void ReferenceMidiParser::push(std::uint8_t byte) {
  if (byte >= 0xF8) return;
  if (byte == 0xF0) {
    sysex_ = true;
    running_ = 0;
    data_.clear();
    return;
  }
  if (sysex_) {
    if (byte < 0x80 || byte == 0xF7) {
      if (byte == 0xF7) sysex_ = false;
      return;
    }
    sysex_ = false;
  }
  if (byte >= 0xF0) {
    data_.clear();
    switch (byte) {
      case 0xF1: case 0xF3: running_ = byte; expected_ = 1; break;
      case 0xF2: running_ = byte; expected_ = 2; break;
      default: running_ = 0; expected_ = 0; break;
    }
    return;
  }
  if (byte >= 0x80) {
    running_ = byte;
    const int hi = byte >> 4;
    expected_ = (hi == 0xC || hi == 0xD) ? 1 : 2;
    data_.clear();
    return;
  }
  if (running_ == 0) return;
  data_.push_back(byte);
  if (static_cast<int>(data_.size()) < expected_) return;
  if ((running_ >> 4) == 0xB)
    events_.push_back({static_cast<std::uint8_t>(running_ & 0xF), data_[0], data_[1]});
  data_.clear();
  if (running_ >= 0xF0) running_ = 0;
}

std::vector<midi::ControlChange> reference_decode(const std::vector<std::uint8_t>& bytes) {
  ReferenceMidiParser p;
  for (auto b : bytes) p.push(b);
  return p.events();
}

MidiCorpus midi_corpus() {
  MidiCorpus c;
  auto& b = c.bytes;
  auto cc = [&](std::uint8_t ch, std::uint8_t ctl, std::uint8_t v, bool with_status) {
    if (with_status) b.push_back(static_cast<std::uint8_t>(0xB0 | ch));
    b.push_back(ctl);
    b.push_back(v);
    c.expected.push_back({ch, ctl, v});
    ++c.messages;
  };
  // Fader sweep on channel 0 under running status, clock ticks interleaved.
  cc(0, 0, 64, true);
  for (std::uint8_t v = 70; v < 127; v += 4) {
    cc(0, 0, v, false);
    if (v % 8 == 2) b.push_back(0xF8);
  }
  // Real-time bytes inside a message.
  b.insert(b.end(), {0xB0, 0xFE, 0x10, 0xF8, 0x7F});
  c.expected.push_back({0, 16, 127});
  ++c.messages;
  // Note on/off in between breaks running status.
  b.insert(b.end(), {0x90, 60, 100, 62, 90, 0x80, 60, 0});
  c.messages += 3;
  cc(0, 1, 0, true);
  cc(0, 1, 127, false);
  // Program change and channel pressure (one data byte each).
  b.insert(b.end(), {0xC3, 5, 0xD3, 40});
  c.messages += 2;
  // SysEx with a real-time byte inside it.
  b.insert(b.end(), {0xF0, 0x7E, 0x01, 0xFA, 0x02, 0x03, 0xF7});
  ++c.messages;
  for (std::uint8_t ch = 0; ch < 16; ++ch) cc(ch, static_cast<std::uint8_t>(17 + ch % 8), static_cast<std::uint8_t>(ch * 8), true);
  // Pitch bend, song position, tune request.
  b.insert(b.end(), {0xE1, 0x00, 0x40, 0xF2, 0x10, 0x20, 0xF6});
  c.messages += 3;
  cc(2, 24, 33, true);
  b.push_back(0xFC);
  cc(2, 24, 66, false);
  cc(2, 25, 99, false);
  cc(15, 23, 127, true);
  b.insert(b.end(), {0xF8, 0xF8});
  for (std::uint8_t v = 0; v < 12; ++v) cc(5, 2, static_cast<std::uint8_t>(v * 10), v == 0);
  return c;
}

std::vector<std::size_t> random_partition(std::size_t n, Rng& rng) {
  std::vector<std::size_t> out;
  std::uniform_int_distribution<std::size_t> len(0, 9);
  std::size_t used = 0;
  while (used < n) {
    auto l = std::min(len(rng), n - used);
    out.push_back(l);
    used += l;
  }
  return out;
}

ControlSurface golden_surface(const MixerConfig& config, const std::string& preset, const std::string& mode) {
  auto surface = config.make_surface();
  surface.set(config.presets.preset_control(), config.presets.personality_position(preset));
  surface.set_many(config.presets.personality(preset).fader_targets);
  select_mode(surface, config.presets, mode);
  return surface;
}

std::string golden_chain(const MixerConfig& config, const std::string& preset, const std::string& mode) {
  auto snapshot = golden_surface(config, preset, mode).snapshot();
  return compile(snapshot, kGoldenTiles, config.presets.active_mode(snapshot), config.descriptors, false).serialize();
}

std::vector<Command> random_commands(const MixerConfig& config, Rng& rng, int count) {
  const auto& specs = config.controls;
  const auto& words = config.vocabulary->words();
  std::uniform_int_distribution<int> pick(0, 99);
  std::uniform_int_distribution<std::size_t> spec_i(0, specs.size() - 1);
  std::uniform_int_distribution<std::size_t> word_i(0, words.size() - 1);
  std::uniform_int_distribution<int> cell(0, 3);
  std::vector<Command> out;
  for (int i = 0; i < count; ++i) {
    int r = pick(rng);
    if (r < 35) {
      const auto& s = specs[spec_i(rng)];
      double v = s.kind == ControlKind::SelectorKnob ? std::uniform_int_distribution<int>(-1, s.positions())(rng)
                                                     : std::uniform_real_distribution<double>(-1.3, 1.3)(rng);
      out.push_back(cmd::SetControl{s.id, v});
    } else if (r < 45) {
      const auto& p = config.presets.personalities();
      auto k = std::uniform_int_distribution<std::size_t>(0, p.size())(rng);
      out.push_back(cmd::SelectPersonalityPreset{k < p.size() ? p[k].id : "Nobody"});
    } else if (r < 52) {
      const auto& m = config.presets.modes();
      auto k = std::uniform_int_distribution<std::size_t>(0, m.size())(rng);
      out.push_back(cmd::SelectMode{k < m.size() ? m[k].id : "Nowhere"});
    } else if (r < 70) {
      out.push_back(cmd::PlaceTile{cell(rng), cell(rng), r == 69 ? "notaword" : words[word_i(rng)]});
    } else if (r < 78) {
      out.push_back(cmd::RemoveTile{cell(rng), cell(rng)});
    } else if (r < 82) {
      out.push_back(cmd::SetMixerless{pick(rng) < 50});
    } else if (r < 85) {
      out.push_back(cmd::SetControl{"reverb", 0.5});
    } else {
      out.push_back(cmd::Submit{});
    }
  }
  return out;
}

LiveRun run_live(const std::vector<Command>& commands, std::shared_ptr<const MixerConfig> config, Rng& rng) {
  auto stub = std::make_shared<StubBackend>(config->stub);
  Gateway gateway(stub, RetryPolicy{}, [](std::chrono::milliseconds) {}, std::make_shared<LogicalClock>());
  Engine engine(config, std::make_shared<LogicalClock>(0, 7));
  std::uniform_int_distribution<int> ticks(0, 6);
  std::uniform_int_distribution<int> pct(0, 99);
  std::optional<CompletionRequest> in_flight;

  auto finish = [&] {
    if (!in_flight) return;
    if (pct(rng) < 10) {
      engine.fail_completion(Error(ErrorKind::Timeout, "simulated timeout"));
    } else {
      engine.complete(gateway.complete(*in_flight));
    }
    in_flight.reset();
  };
  for (const auto& c : commands) {
    for (int t = ticks(rng); t > 0 && engine.recall_active(); --t) engine.advance_recall();
    // Completions sometimes land after later commands, as they do live.
    if (in_flight && pct(rng) < 60) finish();
    auto o = engine.apply(c);
    if (o.dispatch) in_flight = std::move(o.dispatch);
  }
  finish();
  while (engine.recall_active()) engine.advance_recall();
  return {engine.log().text(), engine.state_document()};
}

}  // namespace memetic::testing
