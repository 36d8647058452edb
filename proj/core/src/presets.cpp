#include "memetic/presets.hpp"

#include <algorithm>
#include <set>

#include "memetic/error.hpp"

namespace memetic {

std::string_view to_string(Easing e) noexcept { return e == Easing::Linear ? "linear" : "smoothstep"; }

Easing parse_easing(std::string_view text) {
  if (text == "linear") return Easing::Linear;
  if (text == "smoothstep") return Easing::Smoothstep;
  throw Error(ErrorKind::ConfigError, "unknown easing '" + std::string(text) + "'");
}

RecallPlan::RecallPlan(std::vector<FaderTrack> tracks, double duration_ms, Easing easing)
    : tracks_(std::move(tracks)), duration_ms_(duration_ms), easing_(easing) {
  if (!(duration_ms_ > 0)) throw Error(ErrorKind::ConfigError, "recall duration must be positive");
}

std::vector<std::pair<std::string, double>> RecallPlan::tick(double t_ms) const {
  std::vector<std::pair<std::string, double>> out;
  out.reserve(tracks_.size());
  if (t_ms >= duration_ms_) {
    for (const auto& tr : tracks_) out.emplace_back(tr.id, tr.target);
    return out;
  }
  double u = std::max(t_ms, 0.0) / duration_ms_;
  double w = easing_ == Easing::Linear ? u : u * u * (3.0 - 2.0 * u);
  for (const auto& tr : tracks_) {
    double v = tr.start + (tr.target - tr.start) * w;
    auto [lo, hi] = std::minmax(tr.start, tr.target);
    out.emplace_back(tr.id, std::clamp(v, lo, hi));
  }
  return out;
}

bool RecallPlan::stationary() const noexcept {
  return std::all_of(tracks_.begin(), tracks_.end(), [](const FaderTrack& t) { return t.start == t.target; });
}

// ---------------------------------------------------------------------------

PresetBank::PresetBank(std::string mode_control, std::vector<ModePreset> modes, std::string preset_control,
                       std::vector<PersonalityPreset> personalities, RecallSettings recall)
    : mode_control_(std::move(mode_control)),
      modes_(std::move(modes)),
      preset_control_(std::move(preset_control)),
      personalities_(std::move(personalities)),
      recall_(recall) {
  std::set<std::string> seen;
  for (const auto& m : modes_) {
    if (!seen.insert(m.id).second) throw Error(ErrorKind::ConfigError, "duplicate mode '" + m.id + "'");
  }
  seen.clear();
  for (const auto& p : personalities_) {
    if (!seen.insert(p.id).second) throw Error(ErrorKind::ConfigError, "duplicate preset '" + p.id + "'");
  }
  if (!(recall_.duration_ms > 0) || !(recall_.tick_ms > 0))
    throw Error(ErrorKind::ConfigError, "recall duration and tick must be positive");
}

void PresetBank::validate_against(const ControlSurface& surface) const {
  auto check_selector = [&](const std::string& control, auto const& presets) {
    const auto* spec = surface.find(control);
    if (!spec || spec->kind != ControlKind::SelectorKnob)
      throw Error(ErrorKind::ConfigError, "'" + control + "' must be a selector knob on the surface");
    if (spec->positions() != static_cast<int>(presets.size()))
      throw Error(ErrorKind::ConfigError, "'" + control + "' positions do not match its presets");
    for (std::size_t i = 0; i < presets.size(); ++i) {
      if (spec->position_labels[i] != presets[i].id)
        throw Error(ErrorKind::ConfigError, "'" + control + "' position " + std::to_string(i) + " label mismatch");
    }
  };
  check_selector(mode_control_, modes_);
  check_selector(preset_control_, personalities_);

  std::vector<std::string> faders;
  for (const auto& s : surface.specs()) {
    if (s.group == ControlGroup::Personality) faders.push_back(s.id);
  }
  for (const auto& p : personalities_) {
    std::vector<std::string> ids;
    for (const auto& [id, v] : p.fader_targets) {
      if (!(v >= -1.0 && v <= 1.0)) throw Error(ErrorKind::ConfigError, p.id + ": target for " + id + " out of range");
      ids.push_back(id);
    }
    if (ids != faders)
      throw Error(ErrorKind::ConfigError, p.id + ": targets must cover exactly the personality faders in order");
  }
}

const ModePreset& PresetBank::mode(std::string_view id) const { return modes_[mode_position(id)]; }

const ModePreset& PresetBank::mode_at(int position) const {
  if (position < 0 || position >= static_cast<int>(modes_.size()))
    throw Error(ErrorKind::UnknownMode, "position " + std::to_string(position));
  return modes_[position];
}

int PresetBank::mode_position(std::string_view id) const {
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (modes_[i].id == id) return static_cast<int>(i);
  }
  throw Error(ErrorKind::UnknownMode, std::string(id));
}

const PersonalityPreset& PresetBank::personality(std::string_view id) const {
  return personalities_[personality_position(id)];
}

const PersonalityPreset& PresetBank::personality_at(int position) const {
  if (position < 0 || position >= static_cast<int>(personalities_.size()))
    throw Error(ErrorKind::UnknownPreset, "position " + std::to_string(position));
  return personalities_[position];
}

int PresetBank::personality_position(std::string_view id) const {
  for (std::size_t i = 0; i < personalities_.size(); ++i) {
    if (personalities_[i].id == id) return static_cast<int>(i);
  }
  throw Error(ErrorKind::UnknownPreset, std::string(id));
}

const ModePreset& PresetBank::active_mode(const ControlSnapshot& snapshot) const {
  return mode_at(snapshot.at(mode_control_).value.index());
}

RecallPlan select_personality_preset(const ControlSurface& surface, const PresetBank& bank, std::string_view preset_id) {
  const auto& preset = bank.personality(preset_id);
  std::vector<FaderTrack> tracks;
  tracks.reserve(preset.fader_targets.size());
  for (const auto& [id, target] : preset.fader_targets) {
    tracks.push_back({id, surface.value(id).real(), target});
  }
  return RecallPlan(std::move(tracks), bank.recall().duration_ms, bank.recall().easing);
}

const ModePreset& select_mode(ControlSurface& surface, const PresetBank& bank, std::string_view mode_id) {
  int pos = bank.mode_position(mode_id);
  surface.set(bank.mode_control(), pos);
  return bank.modes()[pos];
}

}  // namespace memetic
