#include "memetic/session_script.hpp"

#include <charconv>
#include <sstream>

namespace memetic {

namespace {

int parse_int(const std::string& s, std::size_t line) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw Error(ErrorKind::InvalidCommand, "line " + std::to_string(line) + ": '" + s + "' is not an integer");
  return v;
}

double parse_number(const std::string& s, std::size_t line) {
  std::string_view sv = s;
  if (sv.size() > 1 && sv[0] == '+') sv.remove_prefix(1);
  double v = 0;
  auto [p, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
  if (ec == std::errc{} && p == sv.data() + sv.size()) return v;
  throw Error(ErrorKind::InvalidCommand, "line " + std::to_string(line) + ": '" + s + "' is not a number");
}

}  // namespace

std::vector<Command> parse_session_script(std::string_view text) {
  std::vector<Command> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    if (line[b] == '{') {
      out.push_back(parse_command(std::string_view(line).substr(b)));
      continue;
    }
    std::istringstream words(line);
    std::vector<std::string> w;
    for (std::string t; words >> t;) w.push_back(t);
    auto need = [&](std::size_t n) {
      if (w.size() != n)
        throw Error(ErrorKind::InvalidCommand, "line " + std::to_string(number) + ": '" + w[0] + "' takes " +
                                                   std::to_string(n - 1) + " argument(s)");
    };
    const auto& verb = w[0];
    if (verb == "place") {
      need(4);
      out.push_back(cmd::PlaceTile{parse_int(w[1], number), parse_int(w[2], number), w[3]});
    } else if (verb == "remove") {
      need(3);
      out.push_back(cmd::RemoveTile{parse_int(w[1], number), parse_int(w[2], number)});
    } else if (verb == "preset") {
      need(2);
      out.push_back(cmd::SelectPersonalityPreset{w[1]});
    } else if (verb == "mode") {
      need(2);
      out.push_back(cmd::SelectMode{w[1]});
    } else if (verb == "set") {
      need(3);
      out.push_back(cmd::SetControl{w[1], parse_number(w[2], number)});
    } else if (verb == "mixerless") {
      need(2);
      if (w[1] != "on" && w[1] != "off")
        throw Error(ErrorKind::InvalidCommand, "line " + std::to_string(number) + ": mixerless takes on|off");
      out.push_back(cmd::SetMixerless{w[1] == "on"});
    } else if (verb == "submit") {
      need(1);
      out.push_back(cmd::Submit{});
    } else {
      throw Error(ErrorKind::InvalidCommand, "line " + std::to_string(number) + ": unknown verb '" + verb + "'");
    }
  }
  return out;
}

SessionTranscript run_stub_session(const std::vector<Command>& commands, std::shared_ptr<const MixerConfig> config) {
  auto stub = std::make_shared<StubBackend>(config->stub);
  auto clock = std::make_shared<LogicalClock>(0, 1);
  Gateway gateway(stub, RetryPolicy{}, [](std::chrono::milliseconds) {}, std::make_shared<LogicalClock>());
  Engine engine(config, clock, EngineOptions{.synchronous_recall = true});

  SessionTranscript t;
  auto note_errors = [&](const Outcome& o) {
    for (const auto& b : o.broadcasts) {
      if (b.kind == "error")
        t.errors.push_back(b.body.at("error").get<std::string>() + ": " + b.body.at("message").get<std::string>());
    }
  };
  for (const auto& c : commands) {
    auto outcome = engine.apply(c);
    note_errors(outcome);
    if (!outcome.dispatch) continue;
    Outcome done;
    try {
      done = engine.complete(gateway.complete(*outcome.dispatch));
    } catch (const Error& e) {
      done = engine.fail_completion(e);
    }
    note_errors(done);
    for (const auto& b : done.broadcasts) {
      if (b.kind == "response_ready")
        t.exchanges.push_back({b.body.at("input_text").get<std::string>(), b.body.at("response").get<std::string>()});
    }
  }
  t.log_text = engine.log().text();
  t.final_state = engine.state_document();
  return t;
}

}  // namespace memetic
