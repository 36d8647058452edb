#pragma once

#include <string>
#include <variant>

#include <nlohmann/json.hpp>

namespace memetic {

namespace cmd {
struct SetControl {
  std::string id;
  double value;
};
struct SelectPersonalityPreset {
  std::string id;
};
struct SelectMode {
  std::string id;
};
struct PlaceTile {
  int row;
  int col;
  std::string word;
};
struct RemoveTile {
  int row;
  int col;
};
struct Submit {};
struct SetMixerless {
  bool value;
};
}  // namespace cmd

using Command = std::variant<cmd::SetControl, cmd::SelectPersonalityPreset, cmd::SelectMode, cmd::PlaceTile,
                             cmd::RemoveTile, cmd::Submit, cmd::SetMixerless>;

/// Wire form: {"kind": "<name>", ...fields}. Throws InvalidCommand.
Command parse_command(const nlohmann::json& j);
Command parse_command(std::string_view text);
nlohmann::ordered_json to_json(const Command& command);
std::string_view command_kind(const Command& command);

}  // namespace memetic
