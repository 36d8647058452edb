#include <gtest/gtest.h>

#include "memetic/error.hpp"
#include "memetic/replay.hpp"
#include "memetic/session_script.hpp"

namespace memetic {
namespace {

TEST(Script, ParsesEveryVerb) {
  auto c = parse_session_script(
      "# warm-up\n"
      "place 0 0 ocean\n"
      "  remove 0 0\n"
      "preset Cynic\n"
      "mode Critique\n"
      "set sarcasm +1.0\n"
      "mixerless on\n"
      "{\"kind\":\"set_mixerless\",\"value\":false}\n"
      "\n"
      "submit\n");
  ASSERT_EQ(c.size(), 8u);
  EXPECT_TRUE(std::holds_alternative<cmd::PlaceTile>(c[0]));
  EXPECT_DOUBLE_EQ(std::get<cmd::SetControl>(c[4]).value, 1.0);
  EXPECT_TRUE(std::get<cmd::SetMixerless>(c[5]).value);
  EXPECT_FALSE(std::get<cmd::SetMixerless>(c[6]).value);
  EXPECT_TRUE(std::holds_alternative<cmd::Submit>(c[7]));
}

TEST(Script, ErrorsNameTheLine) {
  for (const char* bad : {"jump 1", "place 0 x sky", "set age", "mixerless maybe", "set age 0.5x"}) {
    try {
      parse_session_script(std::string("submit\n") + bad + "\n");
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidCommand);
      EXPECT_NE(std::string(e.detail()).find("line 2"), std::string::npos) << e.detail();
    }
  }
}

TEST(StubSession, IsReproducibleAndReplayable) {
  auto commands = parse_session_script("place 0 0 ocean\nplace 0 1 dream\npreset Cynic\nset sarcasm 1.0\nsubmit\n");
  auto a = run_stub_session(commands, default_config());
  auto b = run_stub_session(commands, default_config());
  EXPECT_EQ(a.log_text, b.log_text);
  ASSERT_EQ(a.exchanges.size(), 1u);
  EXPECT_EQ(a.exchanges[0].input_text, "ocean dream");
  EXPECT_EQ(a.exchanges[0].response.rfind("Oh, brilliant. ", 0), 0u);
  EXPECT_TRUE(a.errors.empty());
  auto report = replay(a.log_text, default_config());
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.engine->state_document(), a.final_state);
}

TEST(StubSession, RejectedCommandsAreReported) {
  auto t = run_stub_session(parse_session_script("submit\nplace 0 0 zzzz\n"), default_config());
  ASSERT_EQ(t.errors.size(), 2u);
  EXPECT_EQ(t.errors[0].rfind("EmptyBoard", 0), 0u);
  EXPECT_EQ(t.errors[1].rfind("UnknownWord", 0), 0u);
}

}  // namespace
}  // namespace memetic
