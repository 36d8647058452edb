#include <gtest/gtest.h>

#include "memetic/engine.hpp"

namespace memetic {
namespace {

struct EngineFixture : ::testing::Test {
  std::shared_ptr<LogicalClock> clock = std::make_shared<LogicalClock>(1000, 1);
  Engine engine{default_config(), clock};

  std::vector<std::string> kinds(const Outcome& o) {
    std::vector<std::string> k;
    for (const auto& b : o.broadcasts) k.push_back(b.kind);
    return k;
  }
};

TEST_F(EngineFixture, SetControlLogsAndBroadcastsState) {
  auto o = engine.apply(cmd::SetControl{"age", 0.9});
  EXPECT_FALSE(o.error);
  EXPECT_EQ(kinds(o), std::vector<std::string>{"state_changed"});
  EXPECT_DOUBLE_EQ(o.broadcasts[0].body["state"]["values"]["age"].get<double>(), 0.9);
  ASSERT_EQ(engine.log().size(), 1u);
  EXPECT_EQ(engine.log().events()[0].kind, LogKind::ControlSet);
  EXPECT_EQ(engine.log().events()[0].timestamp_ms, 1000);
}

TEST_F(EngineFixture, RejectedCommandLeavesStateAndLogsError) {
  auto before = engine.state_document();
  auto o = engine.apply(cmd::SetControl{"reverb", 1});
  ASSERT_TRUE(o.error);
  EXPECT_EQ(*o.error, ErrorKind::UnknownControl);
  EXPECT_EQ(kinds(o), std::vector<std::string>{"error"});
  EXPECT_EQ(o.broadcasts[0].body["error"], "UnknownControl");
  EXPECT_EQ(engine.state_document(), before);
  const auto& ev = engine.log().events().back();
  EXPECT_EQ(ev.kind, LogKind::Error);
  EXPECT_EQ(ev.payload["stage"], "command");
  EXPECT_EQ(ev.payload["command"]["kind"], "set_control");
}

TEST_F(EngineFixture, PresetRecallTicksThroughAdvance) {
  engine.apply(cmd::SelectPersonalityPreset{"Guru"});
  EXPECT_TRUE(engine.recall_active());
  int ticks = 0;
  Outcome last;
  while (engine.recall_active()) {
    last = engine.advance_recall();
    ++ticks;
  }
  EXPECT_EQ(ticks, 16);
  EXPECT_EQ(kinds(last), (std::vector<std::string>{"fader_moved", "state_changed"}));
  for (const auto& [id, v] : default_config()->presets.personality("Guru").fader_targets)
    EXPECT_EQ(engine.surface().value(id).real(), v) << id;
  EXPECT_EQ(engine.state_document()["personality_preset"], "Guru");
}

TEST_F(EngineFixture, ManualMoveReleasesFaderFromRecall) {
  engine.apply(cmd::SelectPersonalityPreset{"Cynic"});
  engine.advance_recall();
  engine.apply(cmd::SetControl{"optimist_pessimist", 0.4});
  while (engine.recall_active()) engine.advance_recall();
  EXPECT_DOUBLE_EQ(engine.surface().value("optimist_pessimist").real(), 0.4);
  EXPECT_EQ(engine.surface().value("trusting_suspicious").real(), -0.9);
}

TEST_F(EngineFixture, NewSelectionReplacesPlan) {
  engine.apply(cmd::SelectPersonalityPreset{"Cynic"});
  for (int i = 0; i < 5; ++i) engine.advance_recall();
  engine.apply(cmd::SelectPersonalityPreset{"Bestie"});
  while (engine.recall_active()) engine.advance_recall();
  for (const auto& [id, v] : default_config()->presets.personality("Bestie").fader_targets)
    EXPECT_EQ(engine.surface().value(id).real(), v) << id;
}

TEST_F(EngineFixture, PresetKnobRoutesToRecall) {
  engine.apply(cmd::SetControl{"personality_preset", 2});
  EXPECT_TRUE(engine.recall_active());
  EXPECT_EQ(engine.log().events().back().kind, LogKind::PresetSelected);
  auto o = engine.apply(cmd::SetControl{"personality_preset", 9});
  EXPECT_EQ(o.error, ErrorKind::OutOfRange);
}

TEST_F(EngineFixture, SubmitDispatchesAndCompletes) {
  engine.apply(cmd::PlaceTile{0, 0, "ocean"});
  auto o = engine.apply(cmd::Submit{});
  ASSERT_TRUE(o.dispatch);
  EXPECT_TRUE(engine.busy());
  EXPECT_EQ(o.dispatch->chain.user_message().text, "ocean");
  EXPECT_EQ(engine.apply(cmd::Submit{}).error, ErrorKind::Busy);

  auto done = engine.complete({"a reply", "stub", 3, o.dispatch->chain.sampling, 0});
  EXPECT_FALSE(engine.busy());
  ASSERT_EQ(kinds(done), (std::vector<std::string>{"response_ready", "state_changed"}));
  EXPECT_EQ(done.broadcasts[0].body["response"], "a reply");
  EXPECT_EQ(*engine.last_response(), "a reply");
  auto k = [&](std::size_t back) { return engine.log().events()[engine.log().size() - back].kind; };
  EXPECT_EQ(k(1), LogKind::ResponseReceived);
}

TEST_F(EngineFixture, LoggedChainIsTheDispatchedChain) {
  engine.apply(cmd::PlaceTile{0, 0, "sky"});
  auto o = engine.apply(cmd::Submit{});
  const auto& events = engine.log().events();
  auto it = std::find_if(events.begin(), events.end(), [](const auto& e) { return e.kind == LogKind::ChainCompiled; });
  ASSERT_NE(it, events.end());
  EXPECT_EQ(it->payload["chain"].get<std::string>(), o.dispatch->chain.serialize());
}

TEST_F(EngineFixture, SubmitOnEmptyBoardFails) {
  auto o = engine.apply(cmd::Submit{});
  EXPECT_EQ(o.error, ErrorKind::EmptyBoard);
  EXPECT_FALSE(engine.busy());
}

TEST_F(EngineFixture, FailedCompletionClearsBusy) {
  engine.apply(cmd::PlaceTile{0, 0, "sky"});
  engine.apply(cmd::Submit{});
  auto o = engine.fail_completion(Error(ErrorKind::Timeout, "slow"));
  EXPECT_FALSE(engine.busy());
  EXPECT_EQ(o.broadcasts.front().kind, "error");
  EXPECT_EQ(engine.log().events().back().payload["stage"], "completion");
}

TEST_F(EngineFixture, MixerlessSubmit) {
  engine.apply(cmd::SetControl{"sarcasm", 1});
  engine.apply(cmd::SetMixerless{true});
  engine.apply(cmd::PlaceTile{0, 0, "sky"});
  auto o = engine.apply(cmd::Submit{});
  ASSERT_TRUE(o.dispatch);
  EXPECT_EQ(o.dispatch->chain.system_text(), default_config()->descriptors.mixerless().system_text);
  EXPECT_TRUE(engine.state_document()["mixerless"].get<bool>());
}

TEST_F(EngineFixture, SynchronousRecallFinishesInsideApply) {
  Engine sync(default_config(), clock, EngineOptions{.synchronous_recall = true});
  auto o = sync.apply(cmd::SelectPersonalityPreset{"Accountant"});
  EXPECT_FALSE(sync.recall_active());
  EXPECT_EQ(std::count_if(o.broadcasts.begin(), o.broadcasts.end(), [](const auto& b) { return b.kind == "fader_moved"; }),
            16);
}

TEST_F(EngineFixture, StateDocumentShape) {
  auto doc = engine.state_document();
  for (const char* key : {"revision", "specs", "values", "mode", "personality_preset", "board", "input_text",
                          "last_input", "last_response", "busy", "mixerless", "recall"})
    EXPECT_TRUE(doc.contains(key)) << key;
  EXPECT_EQ(doc["specs"].size(), 15u);
  EXPECT_EQ(doc["specs"][0]["id"], "mode");
}

}  // namespace
}  // namespace memetic
