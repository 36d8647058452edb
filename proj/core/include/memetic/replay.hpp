#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "memetic/engine.hpp"
#include "memetic/session_log.hpp"

namespace memetic {

struct ReplayMismatch {
  std::uint64_t seq;
  std::string what;
};

struct ReplayReport {
  std::unique_ptr<Engine> engine;  // final reconstructed state
  std::size_t records = 0;
  std::size_t chains_checked = 0;
  std::vector<ReplayMismatch> mismatches;

  bool ok() const noexcept { return mismatches.empty(); }
};

/// Re-applies the logged commands against a fresh engine. Logged responses
/// are fed back as completions. Every regenerated record must match the
/// original (ignoring timestamps); chain_compiled payloads must match byte
/// for byte. Throws CorruptLogError when the log cannot be interpreted.
ReplayReport replay(const std::vector<SessionEvent>& log, std::shared_ptr<const MixerConfig> config);
ReplayReport replay(std::string_view log_text, std::shared_ptr<const MixerConfig> config);

}  // namespace memetic
