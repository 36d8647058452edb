#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "memetic/config.hpp"
#include "memetic/midi.hpp"
#include "memetic/prompt_compiler.hpp"
#include "memetic/replay.hpp"
#include "memetic/session_script.hpp"
#ifdef MEMETIC_WITH_SERVICE
#include "memetic/service.hpp"
#endif

namespace {

using namespace memetic;

std::shared_ptr<const MixerConfig> load(const std::string& path) {
  if (path.empty()) return default_config();
  return std::make_shared<const MixerConfig>(load_config_file(path));
}

// Accepts {"values": {"id": v, ...}} or the state document form
// {"values": [["id", v], ...]}; an optional "mode" names the mode preset.
ControlSurface surface_from_state(const MixerConfig& config, const nlohmann::json& state) {
  auto surface = config.make_surface();
  std::vector<std::pair<std::string, double>> values;
  const auto& v = state.at("values");
  if (v.is_object()) {
    for (const auto& [id, x] : v.items()) values.emplace_back(id, x.get<double>());
  } else {
    for (const auto& pair : v) values.emplace_back(pair.at(0).get<std::string>(), pair.at(1).get<double>());
  }
  surface.set_many(values);
  if (state.contains("mode")) select_mode(surface, config.presets, state.at("mode").get<std::string>());
  return surface;
}

std::string validated_tiles(const Vocabulary& vocabulary, const std::string& tiles) {
  std::istringstream in(tiles);
  std::string out;
  for (std::string word; in >> word;) {
    if (!vocabulary.contains(word)) throw Error(ErrorKind::UnknownWord, "'" + word + "' is not on the slate");
    if (!out.empty()) out += ' ';
    out += word;
  }
  return out;
}

int run_compile(const std::string& config_path, const std::string& state_path, const std::string& tiles,
                bool mixerless) {
  auto config = load(config_path);
  auto state = nlohmann::json::parse(read_text_file(state_path));
  auto surface = surface_from_state(*config, state);
  auto snapshot = surface.snapshot();
  auto chain = compile(snapshot, validated_tiles(*config->vocabulary, tiles), config->presets.active_mode(snapshot),
                       config->descriptors, mixerless);
  std::cout << chain.serialize() << '\n';
  return 0;
}

int run_replay(const std::string& config_path, const std::string& log_path) {
  auto report = replay(read_text_file(log_path), load(config_path));
  std::cout << "records " << report.records << ", chains " << report.chains_checked << ", mismatches "
            << report.mismatches.size() << '\n';
  for (const auto& m : report.mismatches) std::cout << "  seq " << m.seq << ": " << m.what << '\n';
  return report.ok() ? 0 : 1;
}

int run_stub_session_cmd(const std::string& config_path, const std::string& script_path, const std::string& log_path) {
  auto transcript = run_stub_session(parse_session_script(read_text_file(script_path)), load(config_path));
  for (const auto& e : transcript.errors) std::cout << "! " << e << '\n';
  for (const auto& x : transcript.exchanges) std::cout << "> " << x.input_text << "\n< " << x.response << '\n';
  if (!log_path.empty()) {
    std::ofstream out(log_path, std::ios::binary);
    out << transcript.log_text;
    if (!out) throw Error(ErrorKind::ConfigError, "cannot write " + log_path);
  }
  return 0;
}

#ifdef MEMETIC_WITH_SERVICE
// Reads raw MIDI bytes until end of file; device nodes and FIFOs block.
void pump_midi(const std::string& path, midi::Adapter adapter, Console& console, const MixerConfig& config,
               const std::atomic<bool>& stopping) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "memetic: cannot open MIDI input " << path << '\n';
    return;
  }
  midi::Decoder decoder;
  std::uint8_t buf[256];
  while (!stopping && in) {
    in.read(reinterpret_cast<char*>(buf), sizeof buf);
    auto n = static_cast<std::size_t>(in.gcount());
    if (n == 0) break;
    for (const auto& event : decoder.feed({buf, n})) {
      auto command = adapter.map_event(event);
      if (!command) continue;
      const auto* spec = [&]() -> const ControlSpec* {
        for (const auto& c : config.controls)
          if (c.id == command->control_id) return &c;
        return nullptr;
      }();
      if (spec) console.apply(cmd::SetControl{spec->id, normalize_midi(command->raw7, *spec).as_double()});
    }
  }
}

int run_serve(const std::string& config_path, const std::string& address, std::uint16_t port,
              const std::string& midi_port, const std::string& mapping_path, const std::string& log_path) {
  auto config = load(config_path);
  std::ofstream log_file;
  ConsoleOptions options;
  if (!log_path.empty()) {
    log_file.open(log_path, std::ios::binary | std::ios::app);
    if (!log_file) throw Error(ErrorKind::ConfigError, "cannot open " + log_path);
    options.log_sink = &log_file;
  }
  Console console(config, make_backend(*config), options);
  ConsoleServer server(console, ServerOptions{.address = address, .port = port});

  std::atomic<bool> stopping{false};
  std::thread midi_thread;
  if (!midi_port.empty()) {
    auto surface = config->make_surface();
    auto mapping = midi::Mapping::from_json(
        mapping_path.empty() ? std::string(default_midi_mapping_text()) : read_text_file(mapping_path), &surface);
    midi_thread = std::thread(pump_midi, midi_port, midi::Adapter(std::move(mapping)), std::ref(console),
                              std::cref(*config), std::cref(stopping));
    midi_thread.detach();
  }
  std::cerr << "memetic: serving on http://" << address << ':' << server.port() << " (ws at /ws)\n";
  server.run(true);
  stopping = true;
  return 0;
}
#endif

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Memetic Mixer console"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "Mixer config JSON (defaults to the built-in config)");

  auto* compile_cmd = app.add_subcommand("compile", "Compile a control state and tiles into a prompt chain");
  std::string state_path, tiles;
  bool mixerless = false;
  compile_cmd->add_option("--state", state_path, "State JSON with a \"values\" field")->required();
  compile_cmd->add_option("--tiles", tiles, "Tile words in reading order")->required();
  compile_cmd->add_flag("--mixerless", mixerless, "Bypass the control surface");

  auto* replay_cmd = app.add_subcommand("replay", "Re-run a session log and verify it");
  std::string log_in;
  replay_cmd->add_option("logfile", log_in, "JSONL session log")->required();

  auto* stub_cmd = app.add_subcommand("stub-session", "Run a session script against the stub backend");
  std::string script_path, session_log;
  stub_cmd->add_option("script", script_path, "Session script")->required();
  stub_cmd->add_option("--log", session_log, "Write the session log here");

#ifdef MEMETIC_WITH_SERVICE
  auto* serve_cmd = app.add_subcommand("serve", "Serve the console over HTTP and WebSocket");
  std::string address = "127.0.0.1", midi_port, mapping_path, serve_log;
  std::uint16_t port = 8080;
  serve_cmd->add_option("--address", address, "Bind address");
  serve_cmd->add_option("--port", port, "TCP port (0 picks one)");
  serve_cmd->add_option("--midi-port", midi_port, "Raw MIDI byte source (device node, FIFO, or capture file)");
  serve_cmd->add_option("--midi-mapping", mapping_path, "MIDI mapping JSON");
  serve_cmd->add_option("--log", serve_log, "Append the session log here");
#endif

  CLI11_PARSE(app, argc, argv);

  try {
    if (*compile_cmd) return run_compile(config_path, state_path, tiles, mixerless);
    if (*replay_cmd) return run_replay(config_path, log_in);
    if (*stub_cmd) return run_stub_session_cmd(config_path, script_path, session_log);
#ifdef MEMETIC_WITH_SERVICE
    if (*serve_cmd) return run_serve(config_path, address, port, midi_port, mapping_path, serve_log);
#endif
  } catch (const memetic::Error& e) {
    std::cerr << "memetic: " << e.name() << ": " << e.detail() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "memetic: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
