#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "memetic/control_surface.hpp"

namespace memetic {

struct PersonalityPreset {
  std::string id;
  std::string description;
  // One target per personality fader, in surface declaration order.
  std::vector<std::pair<std::string, double>> fader_targets;
};

struct ModePreset {
  std::string id;
  std::string description;
  std::string task_instruction;
};

enum class Easing { Linear, Smoothstep };
std::string_view to_string(Easing e) noexcept;
Easing parse_easing(std::string_view text);

struct FaderTrack {
  std::string id;
  double start;
  double target;
};

/// Simulated motorized-fader travel from the current positions to a preset.
class RecallPlan {
 public:
  RecallPlan(std::vector<FaderTrack> tracks, double duration_ms, Easing easing);

  const std::vector<FaderTrack>& tracks() const noexcept { return tracks_; }
  double duration_ms() const noexcept { return duration_ms_; }
  Easing easing() const noexcept { return easing_; }

  /// Fader values at time t. t <= 0 yields the starts; t >= duration yields
  /// the targets exactly. Values never leave [start, target].
  std::vector<std::pair<std::string, double>> tick(double t_ms) const;

  /// True when every track already sits on its target.
  bool stationary() const noexcept;

 private:
  std::vector<FaderTrack> tracks_;
  double duration_ms_;
  Easing easing_;
};

inline std::vector<std::pair<std::string, double>> tick_recall(const RecallPlan& plan, double t_ms) {
  return plan.tick(t_ms);
}

struct RecallSettings {
  double duration_ms = 800.0;
  double tick_ms = 50.0;
  Easing easing = Easing::Linear;
};

/// The two selector knobs: task modes and personality presets.
class PresetBank {
 public:
  PresetBank(std::string mode_control, std::vector<ModePreset> modes, std::string preset_control,
             std::vector<PersonalityPreset> personalities, RecallSettings recall);

  /// Checks selector sizes/labels and preset targets against the surface.
  void validate_against(const ControlSurface& surface) const;

  const std::string& mode_control() const noexcept { return mode_control_; }
  const std::string& preset_control() const noexcept { return preset_control_; }
  const std::vector<ModePreset>& modes() const noexcept { return modes_; }
  const std::vector<PersonalityPreset>& personalities() const noexcept { return personalities_; }
  const RecallSettings& recall() const noexcept { return recall_; }

  const ModePreset& mode(std::string_view id) const;
  const ModePreset& mode_at(int position) const;
  int mode_position(std::string_view id) const;

  const PersonalityPreset& personality(std::string_view id) const;
  const PersonalityPreset& personality_at(int position) const;
  int personality_position(std::string_view id) const;

  /// Mode currently selected on the surface's mode knob.
  const ModePreset& active_mode(const ControlSnapshot& snapshot) const;

 private:
  std::string mode_control_;
  std::vector<ModePreset> modes_;
  std::string preset_control_;
  std::vector<PersonalityPreset> personalities_;
  RecallSettings recall_;
};

/// Builds the recall plan for a personality preset. Does not touch the surface.
RecallPlan select_personality_preset(const ControlSurface& surface, const PresetBank& bank, std::string_view preset_id);

/// Turns the mode knob to `mode_id` and returns the now-active mode.
const ModePreset& select_mode(ControlSurface& surface, const PresetBank& bank, std::string_view mode_id);

}  // namespace memetic
