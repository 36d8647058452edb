#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "memetic/clock.hpp"
#include "memetic/prompt_compiler.hpp"

namespace memetic {

struct CompletionRequest {
  PromptChain chain;
  std::chrono::milliseconds timeout{30000};
  int retry_budget = 2;
};

struct CompletionResult {
  std::string text;
  std::string backend_id;
  std::int64_t latency_ms = 0;
  SamplingParams sampling;
  int retries = 0;
};

enum class FailureClass { None, Transport, Timeout, RateLimited, Auth, Backend };

/// What one attempt against a backend produced.
struct BackendReply {
  FailureClass failure = FailureClass::None;
  std::string text;
  int status = 0;
  std::string detail;

  bool ok() const noexcept { return failure == FailureClass::None; }
  static BackendReply success(std::string text) { return {FailureClass::None, std::move(text), 200, {}}; }
  static BackendReply fail(FailureClass f, int status, std::string detail) { return {f, {}, status, std::move(detail)}; }
};

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual std::string id() const = 0;
  virtual BackendReply send(const PromptChain& chain, std::chrono::milliseconds timeout) = 0;
};

// ---------------------------------------------------------------------------
// Offline stub

enum class StubEffect { OneWord, OneSentence, Paragraphs, Sarcastic };

struct StubRule {
  std::string match;  // substring searched in the system message
  StubEffect effect;
};

struct StubRules {
  std::vector<StubRule> rules;
  std::string persona_marker = "Personality:";
};

StubEffect parse_stub_effect(std::string_view text);

/// Deterministic function of the chain bytes. Folds the user text and a hash
/// of the whole chain into the reply, and honours length/sarcasm clauses.
std::string stub_complete(const PromptChain& chain, const StubRules& rules);

class StubBackend final : public ChatBackend {
 public:
  explicit StubBackend(StubRules rules) : rules_(std::move(rules)) {}

  std::string id() const override { return "stub"; }
  BackendReply send(const PromptChain& chain, std::chrono::milliseconds timeout) override;

  /// The next `count` sends fail with `failure` before the stub answers again.
  void inject_failures(int count, FailureClass failure);
  int calls() const noexcept { return calls_.load(); }

 private:
  StubRules rules_;
  std::atomic<int> pending_failures_{0};
  std::atomic<FailureClass> failure_{FailureClass::Transport};
  std::atomic<int> calls_{0};
};

// ---------------------------------------------------------------------------
// Live HTTP chat-completion backend

struct HttpBackendConfig {
  std::string endpoint = "https://api.openai.com";  // scheme://host[:port]
  std::string path = "/v1/chat/completions";
  std::string model = "gpt-4o";
  std::string credential_env = "MEMETIC_API_KEY";
};

/// Request body for a chain. Temperature is copied verbatim.
nlohmann::json chat_request_body(const PromptChain& chain, const std::string& model);
/// Extracts choices[0].message.content; empty on malformed bodies.
std::string parse_chat_response(const std::string& body);
/// HTTP status -> failure class (200 -> None).
FailureClass classify_status(int status) noexcept;

class HttpChatBackend final : public ChatBackend {
 public:
  explicit HttpChatBackend(HttpBackendConfig config) : config_(std::move(config)) {}

  std::string id() const override { return "http:" + config_.model; }
  BackendReply send(const PromptChain& chain, std::chrono::milliseconds timeout) override;

 private:
  HttpBackendConfig config_;
};

// ---------------------------------------------------------------------------

struct RetryPolicy {
  std::chrono::milliseconds initial_backoff{250};
  double multiplier = 2.0;
};

/// Runs requests against a backend with retry/backoff. Reentrant.
class Gateway {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  Gateway(std::shared_ptr<ChatBackend> backend, RetryPolicy policy = {}, Sleeper sleeper = {},
          std::shared_ptr<Clock> clock = {});

  /// Retries transport, timeout and rate-limit failures within the budget.
  /// Throws AuthFailed immediately; Timeout / RateLimited / BackendError once
  /// the budget is spent.
  CompletionResult complete(const CompletionRequest& request) const;

  ChatBackend& backend() const noexcept { return *backend_; }

 private:
  std::shared_ptr<ChatBackend> backend_;
  RetryPolicy policy_;
  Sleeper sleeper_;
  std::shared_ptr<Clock> clock_;
};

}  // namespace memetic
