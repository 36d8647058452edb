#include "memetic/commands.hpp"

#include "memetic/error.hpp"

namespace memetic {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

Command parse_command(const nlohmann::json& j) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "set_control") {
      const auto& v = j.at("value");
      if (!v.is_number()) throw Error(ErrorKind::InvalidCommand, "set_control.value must be a number");
      return cmd::SetControl{j.at("id").get<std::string>(), v.get<double>()};
    }
    if (kind == "select_personality_preset") return cmd::SelectPersonalityPreset{j.at("id").get<std::string>()};
    if (kind == "select_mode") return cmd::SelectMode{j.at("id").get<std::string>()};
    if (kind == "place_tile")
      return cmd::PlaceTile{j.at("row").get<int>(), j.at("col").get<int>(), j.at("word").get<std::string>()};
    if (kind == "remove_tile") return cmd::RemoveTile{j.at("row").get<int>(), j.at("col").get<int>()};
    if (kind == "submit") return cmd::Submit{};
    if (kind == "set_mixerless") return cmd::SetMixerless{j.at("value").get<bool>()};
    throw Error(ErrorKind::InvalidCommand, "unknown command kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidCommand, e.what());
  }
}

Command parse_command(std::string_view text) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorKind::InvalidCommand, "command is not a JSON object");
  return parse_command(j);
}

std::string_view command_kind(const Command& command) {
  return std::visit(overloaded{
                        [](const cmd::SetControl&) { return "set_control"; },
                        [](const cmd::SelectPersonalityPreset&) { return "select_personality_preset"; },
                        [](const cmd::SelectMode&) { return "select_mode"; },
                        [](const cmd::PlaceTile&) { return "place_tile"; },
                        [](const cmd::RemoveTile&) { return "remove_tile"; },
                        [](const cmd::Submit&) { return "submit"; },
                        [](const cmd::SetMixerless&) { return "set_mixerless"; },
                    },
                    command);
}

nlohmann::ordered_json to_json(const Command& command) {
  nlohmann::ordered_json j;
  j["kind"] = command_kind(command);
  std::visit(overloaded{
                 [&](const cmd::SetControl& c) {
                   j["id"] = c.id;
                   j["value"] = c.value;
                 },
                 [&](const cmd::SelectPersonalityPreset& c) { j["id"] = c.id; },
                 [&](const cmd::SelectMode& c) { j["id"] = c.id; },
                 [&](const cmd::PlaceTile& c) {
                   j["row"] = c.row;
                   j["col"] = c.col;
                   j["word"] = c.word;
                 },
                 [&](const cmd::RemoveTile& c) {
                   j["row"] = c.row;
                   j["col"] = c.col;
                 },
                 [](const cmd::Submit&) {},
                 [&](const cmd::SetMixerless& c) { j["value"] = c.value; },
             },
             command);
  return j;
}

}  // namespace memetic
