#include <gtest/gtest.h>

#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "memetic/config.hpp"
#include "memetic/error.hpp"

namespace memetic {
namespace {

const MixerConfig& cfg() { return *default_config(); }

PromptChain chain_for(std::initializer_list<std::pair<const char*, double>> settings, std::string_view tiles) {
  auto s = cfg().make_surface();
  for (auto [id, v] : settings) s.set(id, v);
  auto snap = s.snapshot();
  return compile(snap, tiles, cfg().presets.active_mode(snap), cfg().descriptors, false);
}

TEST(Stub, DeterministicInChainBytes) {
  auto a = chain_for({}, "ocean dream");
  auto b = chain_for({{"age", 1.0}}, "ocean dream");
  EXPECT_EQ(stub_complete(a, cfg().stub), stub_complete(a, cfg().stub));
  EXPECT_NE(stub_complete(a, cfg().stub), stub_complete(b, cfg().stub));
  EXPECT_NE(stub_complete(a, cfg().stub).find("ocean dream"), std::string::npos);
}

TEST(Stub, OneWordLength) {
  auto reply = stub_complete(chain_for({{"length", 0.0}}, "ocean dream"), cfg().stub);
  EXPECT_EQ(reply.find(' '), std::string::npos) << reply;
  EXPECT_EQ(reply.rfind("ocean-dream", 0), 0u) << reply;
}

TEST(Stub, SarcasmAndPersona) {
  auto reply = stub_complete(chain_for({{"sarcasm", 1.0}, {"optimist_pessimist", -1.0}}, "sky"), cfg().stub);
  EXPECT_EQ(reply.rfind("Oh, brilliant. ", 0), 0u) << reply;
  EXPECT_NE(reply.find("deeply pessimistic"), std::string::npos) << reply;
}

TEST(Stub, ParagraphsProduceBlankLines) {
  auto reply = stub_complete(chain_for({{"length", 1.0}}, "sky"), cfg().stub);
  EXPECT_NE(reply.find("\n\n"), std::string::npos) << reply;
}

struct Recorder {
  std::vector<std::chrono::milliseconds> sleeps;
  Gateway::Sleeper sleeper() {
    return [this](std::chrono::milliseconds d) { sleeps.push_back(d); };
  }
};

TEST(Gateway, RetriesTransientFailuresWithBackoff) {
  auto stub = std::make_shared<StubBackend>(cfg().stub);
  stub->inject_failures(2, FailureClass::Transport);
  Recorder r;
  Gateway g(stub, RetryPolicy{}, r.sleeper(), std::make_shared<LogicalClock>(0, 5));
  auto result = g.complete({chain_for({}, "sky"), std::chrono::milliseconds(1000), 2});
  EXPECT_EQ(result.retries, 2);
  EXPECT_EQ(stub->calls(), 3);
  EXPECT_EQ(result.backend_id, "stub");
  EXPECT_EQ(result.latency_ms, 5);
  ASSERT_EQ(r.sleeps.size(), 2u);
  EXPECT_EQ(r.sleeps[0].count(), 250);
  EXPECT_EQ(r.sleeps[1].count(), 500);
}

TEST(Gateway, BudgetExhaustionSurfacesClass) {
  for (auto [f, k] : {std::pair{FailureClass::Timeout, ErrorKind::Timeout},
                      std::pair{FailureClass::RateLimited, ErrorKind::RateLimited},
                      std::pair{FailureClass::Transport, ErrorKind::BackendError}}) {
    auto stub = std::make_shared<StubBackend>(cfg().stub);
    stub->inject_failures(5, f);
    Gateway g(stub, RetryPolicy{}, [](auto) {});
    try {
      g.complete({chain_for({}, "sky"), std::chrono::milliseconds(1000), 1});
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), k);
    }
    EXPECT_EQ(stub->calls(), 2);
  }
}

TEST(Gateway, AuthIsNotRetried) {
  auto stub = std::make_shared<StubBackend>(cfg().stub);
  stub->inject_failures(1, FailureClass::Auth);
  Gateway g(stub, RetryPolicy{}, [](auto) {});
  try {
    g.complete({chain_for({}, "sky"), std::chrono::milliseconds(1000), 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AuthFailed);
  }
  EXPECT_EQ(stub->calls(), 1);
}

TEST(Gateway, SamplingEchoesChain) {
  auto chain = chain_for({{"temperature", 0.8}}, "sky");
  Gateway g(std::make_shared<StubBackend>(cfg().stub));
  EXPECT_DOUBLE_EQ(g.complete({chain}).sampling.temperature, chain.sampling.temperature);
}

TEST(Wire, RequestBodyCarriesTemperatureVerbatim) {
  auto chain = chain_for({{"temperature", 0.7}}, "ocean dream");
  auto body = chat_request_body(chain, "gpt-4o");
  EXPECT_EQ(body.at("model"), "gpt-4o");
  EXPECT_EQ(body.at("temperature").get<double>(), chain.sampling.temperature);
  ASSERT_EQ(body.at("messages").size(), 2u);
  EXPECT_EQ(body["messages"][0]["role"], "system");
  EXPECT_EQ(body["messages"][1]["content"], "ocean dream");
}

TEST(Wire, ParseAndClassify) {
  EXPECT_EQ(parse_chat_response(R"({"choices":[{"message":{"role":"assistant","content":"hi"}}]})"), "hi");
  EXPECT_EQ(parse_chat_response("not json"), "");
  EXPECT_EQ(parse_chat_response(R"({"choices":[]})"), "");
  EXPECT_EQ(classify_status(200), FailureClass::None);
  EXPECT_EQ(classify_status(401), FailureClass::Auth);
  EXPECT_EQ(classify_status(403), FailureClass::Auth);
  EXPECT_EQ(classify_status(429), FailureClass::RateLimited);
  EXPECT_EQ(classify_status(408), FailureClass::Timeout);
  EXPECT_EQ(classify_status(500), FailureClass::Backend);
}

// A local chat-completion endpoint that records what it receives.
class FakeProvider {
 public:
  explicit FakeProvider(int status) : status_(status) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      ++hits_;
      auth_ = req.get_header_value("Authorization");
      body_ = req.body;
      res.status = status_;
      res.set_content(R"({"choices":[{"message":{"role":"assistant","content":"live reply"}}]})", "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeProvider() {
    server_.stop();
    thread_.join();
  }
  HttpBackendConfig backend_config() const {
    HttpBackendConfig c;
    c.endpoint = "http://127.0.0.1:" + std::to_string(port_);
    c.credential_env = "MEMETIC_TEST_KEY";
    return c;
  }
  int hits() const { return hits_; }
  std::string auth() const { return auth_; }
  nlohmann::json body() const { return nlohmann::json::parse(body_); }

 private:
  int status_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::atomic<int> hits_{0};
  std::string auth_, body_;
};

TEST(HttpBackend, SendsChainAsChatRequest) {
  FakeProvider provider(200);
  ::setenv("MEMETIC_TEST_KEY", "sk-test", 1);
  auto chain = chain_for({{"temperature", 0.2}}, "blue sky");
  Gateway g(std::make_shared<HttpChatBackend>(provider.backend_config()), RetryPolicy{}, [](auto) {});
  auto result = g.complete({chain, std::chrono::milliseconds(5000), 2});
  EXPECT_EQ(result.text, "live reply");
  EXPECT_EQ(provider.auth(), "Bearer sk-test");
  EXPECT_EQ(provider.body().at("temperature").get<double>(), chain.sampling.temperature);
  EXPECT_EQ(provider.body()["messages"][1]["content"], "blue sky");
}

TEST(HttpBackend, UnauthorizedIsNotRetried) {
  FakeProvider provider(401);
  ::setenv("MEMETIC_TEST_KEY", "sk-bad", 1);
  Gateway g(std::make_shared<HttpChatBackend>(provider.backend_config()), RetryPolicy{}, [](auto) {});
  try {
    g.complete({chain_for({}, "sky"), std::chrono::milliseconds(5000), 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AuthFailed);
    EXPECT_EQ(std::string(e.what()).find("sk-bad"), std::string::npos);
  }
  EXPECT_EQ(provider.hits(), 1);
}

TEST(HttpBackend, RateLimitIsRetried) {
  FakeProvider provider(429);
  ::setenv("MEMETIC_TEST_KEY", "sk-test", 1);
  Gateway g(std::make_shared<HttpChatBackend>(provider.backend_config()), RetryPolicy{}, [](auto) {});
  EXPECT_THROW(g.complete({chain_for({}, "sky"), std::chrono::milliseconds(5000), 2}), Error);
  EXPECT_EQ(provider.hits(), 3);
}

TEST(HttpBackend, MissingCredentialSendsNothing) {
  FakeProvider provider(200);
  ::unsetenv("MEMETIC_TEST_KEY");
  Gateway g(std::make_shared<HttpChatBackend>(provider.backend_config()), RetryPolicy{}, [](auto) {});
  try {
    g.complete({chain_for({}, "sky")});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AuthFailed);
  }
  EXPECT_EQ(provider.hits(), 0);
}

TEST(HttpBackend, UnreachableEndpointIsTransport) {
  HttpBackendConfig c;
  c.endpoint = "http://127.0.0.1:1";
  c.credential_env = "MEMETIC_TEST_KEY";
  ::setenv("MEMETIC_TEST_KEY", "sk-test", 1);
  auto reply = HttpChatBackend(c).send(chain_for({}, "sky"), std::chrono::milliseconds(500));
  EXPECT_TRUE(reply.failure == FailureClass::Transport || reply.failure == FailureClass::Timeout);
}

}  // namespace
}  // namespace memetic
