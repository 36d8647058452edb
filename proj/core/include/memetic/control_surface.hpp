#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace memetic {

enum class ControlKind { BipolarFader, PolarKnob, BipolarKnob, SelectorKnob };

/// Declaration order of the enumerators is the canonical snapshot order.
enum class ControlGroup { System, Modes, Presets, Personality, Filters, Effects };

std::string_view to_string(ControlKind kind) noexcept;
std::string_view to_string(ControlGroup group) noexcept;
ControlKind parse_control_kind(std::string_view text);
ControlGroup parse_control_group(std::string_view text);

constexpr bool is_bipolar(ControlKind kind) noexcept {
  return kind == ControlKind::BipolarFader || kind == ControlKind::BipolarKnob;
}

/// Closed range of a continuous kind: [-1, 1] for bipolar, [0, 1] for polar.
struct ValueRange {
  double low;
  double high;
};
ValueRange continuous_range(ControlKind kind) noexcept;

struct ControlSpec {
  std::string id;
  ControlKind kind = ControlKind::PolarKnob;
  ControlGroup group = ControlGroup::System;
  // Bipolar: {low pole, high pole}, i.e. the labels at -1 and +1.
  // Polar: a single axis label.
  std::vector<std::string> pole_labels;
  // Selector knobs only; size() is the number of detents.
  std::vector<std::string> position_labels;
  // Power-on value. Selector knobs use it as a position index.
  double default_value = 0.0;

  int positions() const noexcept { return static_cast<int>(position_labels.size()); }
};

/// Throws ConfigError when the control breaks its kind's shape rules.
void validate(const ControlSpec& spec);

/// A continuous position or a detent index, depending on the control's kind.
class ControlValue {
 public:
  ControlValue() = default;
  static ControlValue continuous(double v) { return ControlValue(v); }
  static ControlValue detent(int index) { return ControlValue(index); }

  bool is_detent() const noexcept { return std::holds_alternative<int>(v_); }
  double real() const;
  int index() const;
  // Numeric view for either alternative.
  double as_double() const noexcept;

  friend bool operator==(const ControlValue&, const ControlValue&) = default;

 private:
  explicit ControlValue(double v) : v_(v) {}
  explicit ControlValue(int v) : v_(v) {}
  std::variant<double, int> v_{0.0};
};

struct SnapshotEntry {
  std::string id;
  ControlKind kind;
  ControlGroup group;
  ControlValue value;
};

/// Immutable, canonically ordered capture of the surface.
class ControlSnapshot {
 public:
  ControlSnapshot(std::vector<SnapshotEntry> entries, std::uint64_t revision);

  const std::vector<SnapshotEntry>& entries() const noexcept { return entries_; }
  std::uint64_t revision() const noexcept { return revision_; }
  const SnapshotEntry* find(std::string_view id) const noexcept;
  const SnapshotEntry& at(std::string_view id) const;

  // Compact JSON: {"revision":N,"values":[["id",v],...]}
  std::string serialize() const;
  // Same as serialize() without the revision field.
  std::string serialize_values() const;

 private:
  std::vector<SnapshotEntry> entries_;
  std::uint64_t revision_;
};

/// Authoritative mutable surface state. Single writer; share snapshots.
class ControlSurface {
 public:
  explicit ControlSurface(std::vector<ControlSpec> specs);

  const std::vector<ControlSpec>& specs() const noexcept { return specs_; }
  const ControlSpec* find(std::string_view id) const noexcept;
  const ControlSpec& spec(std::string_view id) const;

  ControlValue value(std::string_view id) const;
  std::uint64_t revision() const noexcept { return revision_; }

  /// Clamps continuous input to the kind's range. Selector knobs require an
  /// integral index in [0, positions). Returns the stored value.
  ControlValue set(std::string_view id, double raw);

  /// Applies several continuous updates as one mutation (one revision bump).
  void set_many(std::span<const std::pair<std::string, double>> updates);

  ControlSnapshot snapshot() const;

  // Values plus revision; specs are fixed at construction.
  friend bool operator==(const ControlSurface& a, const ControlSurface& b) {
    return a.revision_ == b.revision_ && a.values_ == b.values_;
  }

 private:
  std::size_t index_of(std::string_view id) const;
  ControlValue coerce(const ControlSpec& spec, double raw) const;

  std::vector<ControlSpec> specs_;
  std::vector<ControlValue> values_;
  std::vector<std::size_t> canonical_order_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::uint64_t revision_ = 0;
};

/// Maps a 7-bit MIDI data value onto the control's range. 64 lands exactly on
/// the bipolar centre; selectors split 0..127 into equal detent bands.
ControlValue normalize_midi(int raw7, const ControlSpec& spec);

}  // namespace memetic
