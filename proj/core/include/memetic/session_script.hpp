#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "memetic/commands.hpp"
#include "memetic/config.hpp"
#include "memetic/engine.hpp"

namespace memetic {

/// Parses a session script. One command per line:
///
///   place <row> <col> <word>     remove <row> <col>
///   preset <id>                  mode <id>
///   set <control> <value>        mixerless on|off
///   submit
///
/// Lines starting with '{' are taken as JSON Command records; '#' starts a
/// comment. Throws InvalidCommand with the line number on bad input.
std::vector<Command> parse_session_script(std::string_view text);

struct SessionTranscript {
  struct Exchange {
    std::string input_text;
    std::string response;
  };
  std::vector<Exchange> exchanges;
  std::vector<std::string> errors;  // "<Kind>: <detail>" for rejected commands
  std::string log_text;
  nlohmann::ordered_json final_state;
};

/// Runs commands synchronously against the stub backend with a logical
/// clock, so the transcript and log are reproducible byte for byte.
SessionTranscript run_stub_session(const std::vector<Command>& commands, std::shared_ptr<const MixerConfig> config);

}  // namespace memetic
