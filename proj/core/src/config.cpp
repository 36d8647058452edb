#include "memetic/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "memetic/error.hpp"

namespace memetic {

namespace detail {
// Generated from config/ at configure time (embedded_defaults.cpp).
extern const char* const kDefaultConfigJson;
extern const char* const kDefaultVocabulary;
extern const char* const kDefaultMidiMapping;
}  // namespace detail

namespace {

using ojson = nlohmann::ordered_json;

ControlSpec parse_control(const ojson& j) {
  ControlSpec s;
  s.id = j.at("id").get<std::string>();
  s.kind = parse_control_kind(j.at("kind").get<std::string>());
  s.group = parse_control_group(j.at("group").get<std::string>());
  if (j.contains("labels")) s.pole_labels = j.at("labels").get<std::vector<std::string>>();
  if (j.contains("positions")) s.position_labels = j.at("positions").get<std::vector<std::string>>();
  s.default_value = j.value("default", 0.0);
  return s;
}

std::vector<ModePreset> parse_modes(const ojson& j) {
  std::vector<ModePreset> out;
  for (const auto& m : j.at("presets")) {
    out.push_back({m.at("id").get<std::string>(), m.value("description", std::string{}),
                   m.at("task_instruction").get<std::string>()});
  }
  return out;
}

std::vector<PersonalityPreset> parse_personalities(const ojson& j, const std::vector<ControlSpec>& controls) {
  std::vector<PersonalityPreset> out;
  for (const auto& p : j.at("presets")) {
    PersonalityPreset preset{p.at("id").get<std::string>(), p.value("description", std::string{}), {}};
    const auto& targets = p.at("fader_targets");
    // Targets are stored in fader declaration order regardless of file order.
    for (const auto& c : controls) {
      if (c.group != ControlGroup::Personality) continue;
      if (!targets.contains(c.id)) throw Error(ErrorKind::ConfigError, preset.id + ": missing target for " + c.id);
      preset.fader_targets.emplace_back(c.id, targets.at(c.id).get<double>());
    }
    if (targets.size() != preset.fader_targets.size())
      throw Error(ErrorKind::ConfigError, preset.id + ": targets name controls that are not personality faders");
    out.push_back(std::move(preset));
  }
  return out;
}

DescriptorTable parse_descriptors(const ojson& root, const std::vector<ControlSpec>& controls) {
  const auto& d = root.at("descriptors");
  SectionHeaders headers;
  if (d.contains("headers")) {
    const auto& h = d.at("headers");
    headers.personality = h.value("personality", headers.personality);
    headers.filters = h.value("filters", headers.filters);
    headers.effects = h.value("effects", headers.effects);
  }
  std::vector<ClauseEntry> entries;
  for (const auto& [id, bins] : d.at("controls").items()) {
    entries.push_back({id, bins.get<std::vector<std::string>>()});
  }
  std::optional<TemperatureMapping> temperature;
  if (d.contains("temperature")) {
    const auto& t = d.at("temperature");
    temperature = TemperatureMapping{t.at("control").get<std::string>(), t.value("min", 0.0), t.value("max", 1.5)};
  }

  // Backend default temperature: explicit, else the mapped power-on knob value.
  double default_temperature = 0.7;
  if (root.contains("sampling") && root.at("sampling").contains("default_temperature")) {
    default_temperature = root.at("sampling").at("default_temperature").get<double>();
  } else if (temperature) {
    for (const auto& c : controls) {
      if (c.id == temperature->control_id) default_temperature = temperature->map(c.default_value);
    }
  }

  MixerlessSettings mixerless;
  if (root.contains("mixerless")) {
    const auto& m = root.at("mixerless");
    mixerless.system_text = m.value("system_text", std::string{});
    mixerless.keep_mode = m.value("keep_mode", false);
  }
  if (mixerless.system_text.empty() && !mixerless.keep_mode)
    throw Error(ErrorKind::ConfigError, "mixerless.system_text must be set unless keep_mode is true");
  return DescriptorTable(std::move(entries), std::move(temperature), default_temperature, std::move(headers),
                         std::move(mixerless));
}

BackendSettings parse_backend(const ojson& root) {
  BackendSettings b;
  if (!root.contains("backend")) return b;
  const auto& j = root.at("backend");
  b.kind = j.value("kind", b.kind);
  if (b.kind != "stub" && b.kind != "http") throw Error(ErrorKind::ConfigError, "backend.kind must be stub or http");
  b.http.endpoint = j.value("endpoint", b.http.endpoint);
  b.http.path = j.value("path", b.http.path);
  b.http.model = j.value("model", b.http.model);
  b.http.credential_env = j.value("credential_env", b.http.credential_env);
  b.timeout = std::chrono::milliseconds(j.value("timeout_ms", 30000));
  b.retry_budget = j.value("retry_budget", 2);
  if (b.timeout.count() <= 0 || b.retry_budget < 0)
    throw Error(ErrorKind::ConfigError, "backend timeout must be positive and retry budget non-negative");
  return b;
}

StubRules parse_stub(const ojson& root) {
  StubRules rules;
  if (!root.contains("stub")) return rules;
  const auto& s = root.at("stub");
  rules.persona_marker = s.value("persona_marker", rules.persona_marker);
  if (s.contains("rules")) {
    for (const auto& r : s.at("rules")) {
      rules.rules.push_back({r.at("match").get<std::string>(), parse_stub_effect(r.at("effect").get<std::string>())});
    }
  }
  return rules;
}

}  // namespace

MixerConfig load_config(std::string_view json_text, const FileResolver& resolve) {
  try {
    auto root = ojson::parse(json_text);

    std::vector<ControlSpec> controls;
    for (const auto& c : root.at("surface").at("controls")) controls.push_back(parse_control(c));
    ControlSurface surface(controls);  // validates specs and id uniqueness

    const auto& recall_j = root.value("recall", ojson::object());
    RecallSettings recall{recall_j.value("duration_ms", 800.0), recall_j.value("tick_ms", 50.0),
                          parse_easing(recall_j.value("easing", std::string("linear")))};
    const auto& modes_j = root.at("modes");
    const auto& personas_j = root.at("personality_presets");
    PresetBank presets(modes_j.at("control").get<std::string>(), parse_modes(modes_j),
                       personas_j.at("control").get<std::string>(), parse_personalities(personas_j, controls), recall);
    presets.validate_against(surface);

    auto descriptors = parse_descriptors(root, controls);
    descriptors.validate_against(surface);

    const auto& vocab_j = root.at("vocabulary");
    std::string vocab_version = vocab_j.value("version", std::string("unversioned"));
    std::shared_ptr<const Vocabulary> vocabulary;
    if (vocab_j.contains("words")) {
      vocabulary = std::make_shared<Vocabulary>(vocab_j.at("words").get<std::vector<std::string>>(), vocab_version);
    } else {
      if (!resolve) throw Error(ErrorKind::ConfigError, "vocabulary.file given but no resolver");
      vocabulary = std::make_shared<Vocabulary>(
          Vocabulary::parse(resolve(vocab_j.at("file").get<std::string>()), vocab_version));
    }

    ojson document = root;
    document["vocabulary"] = {{"version", vocab_version}, {"words", vocabulary->words()}};

    return MixerConfig{root.value("version", std::string("unversioned")),
                       std::move(controls),
                       std::move(presets),
                       std::move(descriptors),
                       parse_backend(root),
                       parse_stub(root),
                       std::move(vocabulary),
                       std::move(document)};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigError, e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

MixerConfig load_config_file(const std::filesystem::path& path) {
  auto base = path.parent_path();
  return load_config(read_text_file(path), [base](const std::string& rel) { return read_text_file(base / rel); });
}

std::string_view default_config_text() noexcept { return detail::kDefaultConfigJson; }
std::string_view default_vocabulary_text() noexcept { return detail::kDefaultVocabulary; }
std::string_view default_midi_mapping_text() noexcept { return detail::kDefaultMidiMapping; }

std::shared_ptr<const MixerConfig> default_config() {
  static const auto config = std::make_shared<const MixerConfig>(load_config(
      default_config_text(), [](const std::string& rel) -> std::string {
        if (rel == "vocabulary.txt") return std::string(default_vocabulary_text());
        throw Error(ErrorKind::ConfigError, "no embedded file '" + rel + "'");
      }));
  return config;
}

std::shared_ptr<ChatBackend> make_backend(const MixerConfig& config) {
  if (config.backend.kind == "http") return std::make_shared<HttpChatBackend>(config.backend.http);
  return std::make_shared<StubBackend>(config.stub);
}

}  // namespace memetic
