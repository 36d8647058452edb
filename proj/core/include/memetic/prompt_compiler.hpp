#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "memetic/control_surface.hpp"
#include "memetic/presets.hpp"

namespace memetic {

inline constexpr std::string_view kCompilerVersion = "memetic-compiler/1";

/// Index of the equal-width bin holding `value`. Bins are left-closed; the
/// last bin is also right-closed. Bin k spans
///   [low + (high - low) * k / bins, low + (high - low) * (k + 1) / bins).
std::size_t quantize(double value, ValueRange range, std::size_t bins);

/// Lower edge of bin k under the formula above (k == bins gives `high`).
double bin_edge(ValueRange range, std::size_t bins, std::size_t k);

/// Clause templates for one control, one per quantization bin.
struct ClauseEntry {
  std::string control_id;
  std::vector<std::string> bins;
};

/// Knob -> native sampling temperature, affine onto [min, max].
struct TemperatureMapping {
  std::string control_id;
  double min = 0.0;
  double max = 1.5;

  double map(double knob) const;
};

struct SectionHeaders {
  std::string personality = "Personality:";
  std::string filters = "Constraints:";
  std::string effects = "Tone:";
};

struct MixerlessSettings {
  std::string system_text;
  bool keep_mode = false;
};

class DescriptorTable {
 public:
  DescriptorTable() = default;
  DescriptorTable(std::vector<ClauseEntry> entries, std::optional<TemperatureMapping> temperature,
                  double default_temperature, SectionHeaders headers, MixerlessSettings mixerless);

  const std::vector<ClauseEntry>& entries() const noexcept { return entries_; }
  const ClauseEntry* find(std::string_view control_id) const noexcept;
  const std::optional<TemperatureMapping>& temperature() const noexcept { return temperature_; }
  double default_temperature() const noexcept { return default_temperature_; }
  const SectionHeaders& headers() const noexcept { return headers_; }
  const MixerlessSettings& mixerless() const noexcept { return mixerless_; }

  /// Copy with `control_id` dropped (its clauses, or the temperature binding).
  DescriptorTable without(std::string_view control_id) const;

  /// Checks bin counts and dead zones against the surface: bipolar controls
  /// need an odd count with an empty centre clause, and every control's
  /// power-on value must render an empty clause.
  void validate_against(const ControlSurface& surface) const;

 private:
  std::vector<ClauseEntry> entries_;
  std::optional<TemperatureMapping> temperature_;
  double default_temperature_ = 0.7;
  SectionHeaders headers_;
  MixerlessSettings mixerless_;
};

/// Clause for the control at `value`. Empty inside the neutral dead zone.
const std::string& render_clause(std::string_view control_id, ControlKind kind, double value,
                                 const DescriptorTable& table);

enum class Role { System, User };
std::string_view to_string(Role r) noexcept;

struct Message {
  Role role;
  std::string text;
  friend bool operator==(const Message&, const Message&) = default;
};

struct SamplingParams {
  double temperature = 0.0;
  friend bool operator==(const SamplingParams&, const SamplingParams&) = default;
};

struct PromptChain {
  std::vector<Message> messages;
  SamplingParams sampling;
  std::uint64_t snapshot_revision = 0;
  std::string compiler_version{kCompilerVersion};

  /// Canonical compact JSON. This is the byte form logged and sent.
  std::string serialize() const;
  /// Messages and sampling only (no provenance).
  std::string serialize_content() const;
  static PromptChain parse(std::string_view text);

  const Message& user_message() const;
  std::string system_text() const;

  friend bool operator==(const PromptChain&, const PromptChain&) = default;
};

/// The individual pieces of the system message, before assembly.
struct PromptSections {
  std::string mode;
  std::string personality;
  std::string filters;
  std::string effects;
};

PromptSections compile_sections(const ControlSnapshot& snapshot, const ModePreset& mode, const DescriptorTable& table);

double sampling_temperature(const ControlSnapshot& snapshot, const DescriptorTable& table);

/// Snapshot + tile text + mode -> chain. Throws EmptyInput for blank tiles.
PromptChain compile(const ControlSnapshot& snapshot, std::string_view tiles, const ModePreset& mode,
                    const DescriptorTable& table, bool mixerless);

}  // namespace memetic
