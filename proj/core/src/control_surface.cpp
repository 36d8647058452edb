#include "memetic/control_surface.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "memetic/error.hpp"

namespace memetic {

namespace {

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view text, const std::pair<std::string_view, Enum> (&table)[N],
                std::string_view what) {
  for (const auto& [name, value] : table) {
    if (name == text) return value;
  }
  throw Error(ErrorKind::ConfigError, "unknown " + std::string(what) + " '" + std::string(text) + "'");
}

constexpr std::pair<std::string_view, ControlKind> kKindNames[] = {
    {"bipolar-fader", ControlKind::BipolarFader},
    {"polar-knob", ControlKind::PolarKnob},
    {"bipolar-knob", ControlKind::BipolarKnob},
    {"selector-knob", ControlKind::SelectorKnob},
};

constexpr std::pair<std::string_view, ControlGroup> kGroupNames[] = {
    {"system", ControlGroup::System},           {"modes", ControlGroup::Modes},
    {"presets", ControlGroup::Presets},         {"personality", ControlGroup::Personality},
    {"filters", ControlGroup::Filters},         {"effects", ControlGroup::Effects},
};

nlohmann::ordered_json value_json(const ControlValue& v) {
  if (v.is_detent()) return v.index();
  return v.real();
}

}  // namespace

std::string_view to_string(ControlKind kind) noexcept {
  for (const auto& [name, value] : kKindNames) {
    if (value == kind) return name;
  }
  return "?";
}

std::string_view to_string(ControlGroup group) noexcept {
  for (const auto& [name, value] : kGroupNames) {
    if (value == group) return name;
  }
  return "?";
}

ControlKind parse_control_kind(std::string_view text) { return parse_enum(text, kKindNames, "control kind"); }
ControlGroup parse_control_group(std::string_view text) { return parse_enum(text, kGroupNames, "control group"); }

ValueRange continuous_range(ControlKind kind) noexcept {
  return is_bipolar(kind) ? ValueRange{-1.0, 1.0} : ValueRange{0.0, 1.0};
}

void validate(const ControlSpec& spec) {
  auto fail = [&](const std::string& why) { throw Error(ErrorKind::ConfigError, "control '" + spec.id + "': " + why); };
  if (spec.id.empty()) fail("empty id");
  if (spec.kind == ControlKind::SelectorKnob) {
    if (spec.positions() < 2) fail("selector needs at least two positions");
    if (!spec.pole_labels.empty()) fail("selector has no pole labels");
    double d = spec.default_value;
    if (d != std::floor(d) || d < 0 || d >= spec.positions()) fail("default position out of range");
    return;
  }
  if (!spec.position_labels.empty()) fail("only selector knobs carry position labels");
  if (is_bipolar(spec.kind) && spec.pole_labels.size() != 2) fail("bipolar controls need exactly two pole labels");
  if (!is_bipolar(spec.kind) && spec.pole_labels.size() != 1) fail("polar controls need one axis label");
  auto r = continuous_range(spec.kind);
  if (!(spec.default_value >= r.low && spec.default_value <= r.high)) fail("default out of range");
}

double ControlValue::real() const {
  if (const double* d = std::get_if<double>(&v_)) return *d;
  throw Error(ErrorKind::WrongKind, "value is a detent index");
}

int ControlValue::index() const {
  if (const int* i = std::get_if<int>(&v_)) return *i;
  throw Error(ErrorKind::WrongKind, "value is continuous");
}

double ControlValue::as_double() const noexcept {
  return std::visit([](auto x) { return static_cast<double>(x); }, v_);
}

// ---------------------------------------------------------------------------

ControlSnapshot::ControlSnapshot(std::vector<SnapshotEntry> entries, std::uint64_t revision)
    : entries_(std::move(entries)), revision_(revision) {}

const SnapshotEntry* ControlSnapshot::find(std::string_view id) const noexcept {
  for (const auto& e : entries_) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

const SnapshotEntry& ControlSnapshot::at(std::string_view id) const {
  if (const auto* e = find(id)) return *e;
  throw Error(ErrorKind::UnknownControl, std::string(id));
}

std::string ControlSnapshot::serialize_values() const {
  nlohmann::ordered_json values = nlohmann::ordered_json::array();
  for (const auto& e : entries_) values.push_back(nlohmann::ordered_json::array({e.id, value_json(e.value)}));
  nlohmann::ordered_json doc;
  doc["values"] = std::move(values);
  return doc.dump();
}

std::string ControlSnapshot::serialize() const {
  nlohmann::ordered_json values = nlohmann::ordered_json::array();
  for (const auto& e : entries_) values.push_back(nlohmann::ordered_json::array({e.id, value_json(e.value)}));
  nlohmann::ordered_json doc;
  doc["revision"] = revision_;
  doc["values"] = std::move(values);
  return doc.dump();
}

// ---------------------------------------------------------------------------

ControlSurface::ControlSurface(std::vector<ControlSpec> specs) : specs_(std::move(specs)) {
  values_.reserve(specs_.size());
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    const auto& s = specs_[i];
    validate(s);
    if (!index_.emplace(s.id, i).second) throw Error(ErrorKind::ConfigError, "duplicate control id '" + s.id + "'");
    values_.push_back(s.kind == ControlKind::SelectorKnob ? ControlValue::detent(static_cast<int>(s.default_value))
                                                          : ControlValue::continuous(s.default_value));
  }
  canonical_order_.resize(specs_.size());
  std::iota(canonical_order_.begin(), canonical_order_.end(), 0);
  std::stable_sort(canonical_order_.begin(), canonical_order_.end(),
                   [&](std::size_t a, std::size_t b) { return specs_[a].group < specs_[b].group; });
}

const ControlSpec* ControlSurface::find(std::string_view id) const noexcept {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &specs_[it->second];
}

const ControlSpec& ControlSurface::spec(std::string_view id) const { return specs_[index_of(id)]; }

std::size_t ControlSurface::index_of(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error(ErrorKind::UnknownControl, std::string(id));
  return it->second;
}

ControlValue ControlSurface::value(std::string_view id) const { return values_[index_of(id)]; }

ControlValue ControlSurface::coerce(const ControlSpec& spec, double raw) const {
  if (std::isnan(raw)) throw Error(ErrorKind::WrongKind, spec.id + ": NaN");
  if (spec.kind == ControlKind::SelectorKnob) {
    if (raw != std::floor(raw)) throw Error(ErrorKind::WrongKind, spec.id + ": selector needs an integral position");
    if (raw < 0 || raw >= spec.positions())
      throw Error(ErrorKind::OutOfRange, spec.id + ": position must be in [0, " + std::to_string(spec.positions()) + ")");
    return ControlValue::detent(static_cast<int>(raw));
  }
  auto r = continuous_range(spec.kind);
  return ControlValue::continuous(std::clamp(raw, r.low, r.high));
}

ControlValue ControlSurface::set(std::string_view id, double raw) {
  auto i = index_of(id);
  auto v = coerce(specs_[i], raw);
  values_[i] = v;
  ++revision_;
  return v;
}

void ControlSurface::set_many(std::span<const std::pair<std::string, double>> updates) {
  // Validate everything first so a bad entry leaves the surface untouched.
  std::vector<std::pair<std::size_t, ControlValue>> staged;
  staged.reserve(updates.size());
  for (const auto& [id, raw] : updates) {
    auto i = index_of(id);
    staged.emplace_back(i, coerce(specs_[i], raw));
  }
  for (auto& [i, v] : staged) values_[i] = v;
  ++revision_;
}

ControlSnapshot ControlSurface::snapshot() const {
  std::vector<SnapshotEntry> entries;
  entries.reserve(specs_.size());
  for (auto i : canonical_order_) {
    const auto& s = specs_[i];
    entries.push_back({s.id, s.kind, s.group, values_[i]});
  }
  return ControlSnapshot(std::move(entries), revision_);
}

ControlValue normalize_midi(int raw7, const ControlSpec& spec) {
  raw7 = std::clamp(raw7, 0, 127);
  switch (spec.kind) {
    case ControlKind::PolarKnob:
      return ControlValue::continuous(raw7 / 127.0);
    case ControlKind::BipolarFader:
    case ControlKind::BipolarKnob:
      return ControlValue::continuous(std::clamp((raw7 - 64) / 63.0, -1.0, 1.0));
    case ControlKind::SelectorKnob: {
      // floor(raw7 / (128 / positions)) in exact integer arithmetic.
      int p = spec.positions();
      return ControlValue::detent(std::min(raw7 * p / 128, p - 1));
    }
  }
  return ControlValue::continuous(0.0);
}

}  // namespace memetic
