#include "memetic/prompt_compiler.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "memetic/error.hpp"

namespace memetic {

double bin_edge(ValueRange range, std::size_t bins, std::size_t k) {
  if (k >= bins) return range.high;
  return range.low + (range.high - range.low) * static_cast<double>(k) / static_cast<double>(bins);
}

std::size_t quantize(double value, ValueRange range, std::size_t bins) {
  if (bins == 0) throw Error(ErrorKind::ConfigError, "bin count must be positive");
  if (!(value > range.low)) return 0;
  if (!(value < range.high)) return bins - 1;
  double scaled = (value - range.low) / (range.high - range.low) * static_cast<double>(bins);
  auto k = static_cast<std::size_t>(std::min(std::floor(scaled), static_cast<double>(bins - 1)));
  // The closed form can land one bin off next to an edge; settle on the
  // edge definition itself.
  while (k > 0 && value < bin_edge(range, bins, k)) --k;
  while (k + 1 < bins && value >= bin_edge(range, bins, k + 1)) ++k;
  return k;
}

double TemperatureMapping::map(double knob) const {
  knob = std::clamp(knob, 0.0, 1.0);
  return min + (max - min) * knob;
}

// ---------------------------------------------------------------------------

DescriptorTable::DescriptorTable(std::vector<ClauseEntry> entries, std::optional<TemperatureMapping> temperature,
                                 double default_temperature, SectionHeaders headers, MixerlessSettings mixerless)
    : entries_(std::move(entries)),
      temperature_(std::move(temperature)),
      default_temperature_(default_temperature),
      headers_(std::move(headers)),
      mixerless_(std::move(mixerless)) {
  for (const auto& e : entries_) {
    if (e.bins.size() < 2) throw Error(ErrorKind::ConfigError, e.control_id + ": need at least two bins");
  }
  if (temperature_ && !(temperature_->max >= temperature_->min && temperature_->min >= 0.0))
    throw Error(ErrorKind::ConfigError, "temperature range must satisfy 0 <= min <= max");
}

const ClauseEntry* DescriptorTable::find(std::string_view control_id) const noexcept {
  for (const auto& e : entries_) {
    if (e.control_id == control_id) return &e;
  }
  return nullptr;
}

DescriptorTable DescriptorTable::without(std::string_view control_id) const {
  DescriptorTable copy = *this;
  std::erase_if(copy.entries_, [&](const ClauseEntry& e) { return e.control_id == control_id; });
  if (copy.temperature_ && copy.temperature_->control_id == control_id) copy.temperature_.reset();
  return copy;
}

void DescriptorTable::validate_against(const ControlSurface& surface) const {
  for (const auto& e : entries_) {
    const auto* spec = surface.find(e.control_id);
    if (!spec) throw Error(ErrorKind::ConfigError, "descriptor for unknown control '" + e.control_id + "'");
    if (spec->kind == ControlKind::SelectorKnob)
      throw Error(ErrorKind::ConfigError, e.control_id + ": selectors have no clauses");
    if (is_bipolar(spec->kind)) {
      if (e.bins.size() % 2 == 0) throw Error(ErrorKind::ConfigError, e.control_id + ": bipolar needs an odd bin count");
      if (!e.bins[e.bins.size() / 2].empty())
        throw Error(ErrorKind::ConfigError, e.control_id + ": centre bin must be empty");
    }
    auto k = quantize(spec->default_value, continuous_range(spec->kind), e.bins.size());
    if (!e.bins[k].empty()) throw Error(ErrorKind::ConfigError, e.control_id + ": power-on position must be neutral");
  }
  if (temperature_) {
    const auto* spec = surface.find(temperature_->control_id);
    if (!spec || spec->kind != ControlKind::PolarKnob)
      throw Error(ErrorKind::ConfigError, "temperature must bind to a polar knob");
  }
}

const std::string& render_clause(std::string_view control_id, ControlKind kind, double value,
                                 const DescriptorTable& table) {
  const auto* entry = table.find(control_id);
  if (!entry) throw Error(ErrorKind::UnknownControl, std::string(control_id));
  return entry->bins[quantize(value, continuous_range(kind), entry->bins.size())];
}

// ---------------------------------------------------------------------------

std::string_view to_string(Role r) noexcept { return r == Role::System ? "system" : "user"; }

namespace {

nlohmann::ordered_json messages_json(const std::vector<Message>& messages) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& m : messages) {
    nlohmann::ordered_json j;
    j["role"] = to_string(m.role);
    j["text"] = m.text;
    arr.push_back(std::move(j));
  }
  return arr;
}

std::string join_section(const std::string& header, const std::vector<std::string>& clauses) {
  std::string out;
  for (const auto& c : clauses) {
    if (c.empty()) continue;
    out += out.empty() ? header + " " + c : " " + c;
  }
  return out;
}

}  // namespace

std::string PromptChain::serialize() const {
  nlohmann::ordered_json j;
  j["compiler"] = compiler_version;
  j["revision"] = snapshot_revision;
  j["messages"] = messages_json(messages);
  j["sampling"] = {{"temperature", sampling.temperature}};
  return j.dump();
}

std::string PromptChain::serialize_content() const {
  nlohmann::ordered_json j;
  j["messages"] = messages_json(messages);
  j["sampling"] = {{"temperature", sampling.temperature}};
  return j.dump();
}

PromptChain PromptChain::parse(std::string_view text) {
  try {
    auto j = nlohmann::json::parse(text);
    PromptChain c;
    c.compiler_version = j.at("compiler").get<std::string>();
    c.snapshot_revision = j.at("revision").get<std::uint64_t>();
    for (const auto& m : j.at("messages")) {
      auto role = m.at("role").get<std::string>();
      if (role != "system" && role != "user") throw Error(ErrorKind::InvalidCommand, "bad role '" + role + "'");
      c.messages.push_back({role == "system" ? Role::System : Role::User, m.at("text").get<std::string>()});
    }
    c.sampling.temperature = j.at("sampling").at("temperature").get<double>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidCommand, std::string("malformed prompt chain: ") + e.what());
  }
}

const Message& PromptChain::user_message() const {
  for (const auto& m : messages) {
    if (m.role == Role::User) return m;
  }
  throw Error(ErrorKind::EmptyInput, "chain has no user message");
}

std::string PromptChain::system_text() const {
  std::string out;
  for (const auto& m : messages) {
    if (m.role != Role::System) continue;
    if (!out.empty()) out += "\n\n";
    out += m.text;
  }
  return out;
}

// ---------------------------------------------------------------------------

PromptSections compile_sections(const ControlSnapshot& snapshot, const ModePreset& mode, const DescriptorTable& table) {
  std::vector<std::string> personality, filters, effects;
  for (const auto& e : snapshot.entries()) {
    if (e.value.is_detent() || !table.find(e.id)) continue;
    const auto& clause = render_clause(e.id, e.kind, e.value.real(), table);
    switch (e.group) {
      case ControlGroup::Personality: personality.push_back(clause); break;
      case ControlGroup::Filters: filters.push_back(clause); break;
      case ControlGroup::Effects: effects.push_back(clause); break;
      default: break;
    }
  }
  const auto& h = table.headers();
  return {mode.task_instruction, join_section(h.personality, personality), join_section(h.filters, filters),
          join_section(h.effects, effects)};
}

double sampling_temperature(const ControlSnapshot& snapshot, const DescriptorTable& table) {
  const auto& t = table.temperature();
  if (!t) return table.default_temperature();
  const auto* e = snapshot.find(t->control_id);
  if (!e || e->value.is_detent()) return table.default_temperature();
  return t->map(e->value.real());
}

PromptChain compile(const ControlSnapshot& snapshot, std::string_view tiles, const ModePreset& mode,
                    const DescriptorTable& table, bool mixerless) {
  auto first = tiles.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw Error(ErrorKind::EmptyInput, "tile text is blank");

  PromptChain chain;
  chain.snapshot_revision = snapshot.revision();
  std::string system;
  if (mixerless) {
    const auto& m = table.mixerless();
    system = m.keep_mode ? mode.task_instruction : m.system_text;
    chain.sampling.temperature = table.default_temperature();
  } else {
    auto s = compile_sections(snapshot, mode, table);
    for (const auto* part : {&s.mode, &s.personality, &s.filters, &s.effects}) {
      if (part->empty()) continue;
      if (!system.empty()) system += "\n\n";
      system += *part;
    }
    chain.sampling.temperature = sampling_temperature(snapshot, table);
  }
  chain.messages.push_back({Role::System, std::move(system)});
  chain.messages.push_back({Role::User, std::string(tiles)});
  return chain;
}

}  // namespace memetic
