#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "memetic/control_surface.hpp"
#include "memetic/llm_gateway.hpp"
#include "memetic/presets.hpp"
#include "memetic/prompt_compiler.hpp"
#include "memetic/tile_slate.hpp"

namespace memetic {

struct BackendSettings {
  std::string kind = "stub";  // "stub" or "http"
  HttpBackendConfig http;
  std::chrono::milliseconds timeout{30000};
  int retry_budget = 2;
};

/// Everything the shared config file defines, validated as a whole.
struct MixerConfig {
  std::string version;
  std::vector<ControlSpec> controls;
  PresetBank presets;
  DescriptorTable descriptors;
  BackendSettings backend;
  StubRules stub;
  std::shared_ptr<const Vocabulary> vocabulary;
  // The document as loaded, with the vocabulary inlined (served on GET /config).
  nlohmann::ordered_json document;

  ControlSurface make_surface() const { return ControlSurface(controls); }
};

/// Resolves a file referenced from the config ("vocabulary.file") to its text.
using FileResolver = std::function<std::string(const std::string& relative_path)>;

MixerConfig load_config(std::string_view json_text, const FileResolver& resolve);
MixerConfig load_config_file(const std::filesystem::path& path);

/// The shipped configuration, compiled into the library.
std::shared_ptr<const MixerConfig> default_config();
std::string_view default_config_text() noexcept;
std::string_view default_vocabulary_text() noexcept;
std::string_view default_midi_mapping_text() noexcept;

std::string read_text_file(const std::filesystem::path& path);

std::shared_ptr<ChatBackend> make_backend(const MixerConfig& config);

}  // namespace memetic
