#include "memetic/replay.hpp"

namespace memetic {

namespace {

Command command_for(const SessionEvent& e) {
  const auto& p = e.payload;
  switch (e.kind) {
    case LogKind::ControlSet: return cmd::SetControl{p.at("id").get<std::string>(), p.at("value").get<double>()};
    case LogKind::PresetSelected: return cmd::SelectPersonalityPreset{p.at("id").get<std::string>()};
    case LogKind::ModeSelected: return cmd::SelectMode{p.at("id").get<std::string>()};
    case LogKind::TilePlaced:
      return cmd::PlaceTile{p.at("row").get<int>(), p.at("col").get<int>(), p.at("word").get<std::string>()};
    case LogKind::TileRemoved: return cmd::RemoveTile{p.at("row").get<int>(), p.at("col").get<int>()};
    case LogKind::MixerlessSet: return cmd::SetMixerless{p.at("value").get<bool>()};
    case LogKind::Submitted: return cmd::Submit{};
    case LogKind::Error: return parse_command(nlohmann::json::parse(p.at("command").dump()));
    default: throw CorruptLogError(e.seq, "record does not carry a command");
  }
}

}  // namespace

ReplayReport replay(const std::vector<SessionEvent>& log, std::shared_ptr<const MixerConfig> config) {
  ReplayReport report;
  report.engine = std::make_unique<Engine>(std::move(config), std::make_shared<LogicalClock>());
  Engine& engine = *report.engine;

  std::size_t i = 0;
  while (i < log.size()) {
    const auto& e = log[i];
    const std::size_t before = engine.log().size();
    try {
      switch (e.kind) {
        case LogKind::FaderMoved:
          if (!engine.recall_active()) {
            report.mismatches.push_back({e.seq, "fader_moved without an active recall"});
            ++i;
            continue;
          }
          engine.advance_recall();
          break;
        case LogKind::ChainCompiled:
          report.mismatches.push_back({e.seq, "chain_compiled without a preceding submit"});
          ++i;
          continue;
        case LogKind::ResponseReceived: {
          const auto& p = e.payload;
          CompletionResult r;
          r.text = p.at("text").get<std::string>();
          r.backend_id = p.at("backend").get<std::string>();
          r.latency_ms = p.at("latency_ms").get<std::int64_t>();
          r.retries = p.at("retries").get<int>();
          engine.complete(r);
          break;
        }
        case LogKind::Error:
          if (e.payload.at("stage").get<std::string>() == "completion") {
            auto kind = parse_error_kind(e.payload.at("error").get<std::string>());
            if (!kind) throw CorruptLogError(e.seq, "unknown error name");
            engine.fail_completion(Error(*kind, e.payload.at("message").get<std::string>()));
          } else {
            engine.apply(command_for(e));
          }
          break;
        default:
          engine.apply(command_for(e));
          break;
      }
    } catch (const CorruptLogError&) {
      throw;
    } catch (const Error& err) {
      throw CorruptLogError(e.seq, err.what());
    } catch (const nlohmann::json::exception& err) {
      throw CorruptLogError(e.seq, err.what());
    }

    const auto& produced = engine.log().events();
    if (produced.size() == before) {
      report.mismatches.push_back({e.seq, "record had no effect on replay"});
      ++i;
      continue;
    }
    for (std::size_t k = before; k < produced.size(); ++k, ++i) {
      if (i >= log.size()) {
        report.mismatches.push_back({produced[k].seq, "replay produced records past the end of the log"});
        break;
      }
      const auto& original = log[i];
      const auto& again = produced[k];
      if (original.kind == LogKind::ChainCompiled && again.kind == LogKind::ChainCompiled) {
        ++report.chains_checked;
        if (original.payload.at("chain").get<std::string>() != again.payload.at("chain").get<std::string>())
          report.mismatches.push_back({original.seq, "recompiled chain differs"});
      } else if (original.kind != again.kind || original.payload != again.payload) {
        report.mismatches.push_back({original.seq, "expected " + original.to_line() + " got " + again.to_line()});
      }
    }
  }
  report.records = log.size();
  return report;
}

ReplayReport replay(std::string_view log_text, std::shared_ptr<const MixerConfig> config) {
  return replay(parse_session_log(log_text), std::move(config));
}

}  // namespace memetic
