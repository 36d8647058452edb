#include "memetic/llm_gateway.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "memetic/error.hpp"

namespace memetic {

namespace {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

// Text of the section introduced by `marker`, up to the next blank line.
std::string section_after(const std::string& system, const std::string& marker) {
  if (marker.empty()) return {};
  auto at = system.find(marker);
  if (at == std::string::npos) return {};
  auto begin = at + marker.size();
  while (begin < system.size() && system[begin] == ' ') ++begin;
  auto end = system.find("\n\n", begin);
  return system.substr(begin, end == std::string::npos ? std::string::npos : end - begin);
}

}  // namespace

StubEffect parse_stub_effect(std::string_view text) {
  if (text == "one_word") return StubEffect::OneWord;
  if (text == "one_sentence") return StubEffect::OneSentence;
  if (text == "paragraphs") return StubEffect::Paragraphs;
  if (text == "sarcastic") return StubEffect::Sarcastic;
  throw Error(ErrorKind::ConfigError, "unknown stub effect '" + std::string(text) + "'");
}

std::string stub_complete(const PromptChain& chain, const StubRules& rules) {
  const std::string system = chain.system_text();
  const std::string& user = chain.user_message().text;

  bool one_word = false, one_sentence = false, paragraphs = false, sarcastic = false;
  for (const auto& r : rules.rules) {
    if (r.match.empty() || system.find(r.match) == std::string::npos) continue;
    switch (r.effect) {
      case StubEffect::OneWord: one_word = true; break;
      case StubEffect::OneSentence: one_sentence = true; break;
      case StubEffect::Paragraphs: paragraphs = true; break;
      case StubEffect::Sarcastic: sarcastic = true; break;
    }
  }

  if (one_word) {
    std::string word;
    for (const auto& w : split_words(user)) word += word.empty() ? w : "-" + w;
    return word.empty() ? "..." : word;
  }

  const std::string tag = "[stub " + hex64(fnv1a64(chain.serialize())) + "]";
  const std::string opener = sarcastic ? "Oh, brilliant. " : "";
  const std::string reply = opener + "Stub reply to \"" + user + "\".";
  if (one_sentence) return opener + "Stub reply to \"" + user + "\" " + tag + ".";

  std::string persona = section_after(system, rules.persona_marker);
  std::string voice = persona.empty() ? "Speaking in a neutral voice." : "Speaking as: " + persona;
  if (paragraphs) {
    std::string task = system.substr(0, system.find("\n\n"));
    return reply + " " + voice + "\n\n" + "Task: " + task + "\n\n" + tag;
  }
  return reply + " " + voice + " " + tag;
}

BackendReply StubBackend::send(const PromptChain& chain, std::chrono::milliseconds) {
  calls_.fetch_add(1);
  int pending = pending_failures_.load();
  while (pending > 0) {
    if (pending_failures_.compare_exchange_weak(pending, pending - 1))
      return BackendReply::fail(failure_.load(), failure_.load() == FailureClass::RateLimited ? 429 : 0,
                                "injected failure");
  }
  return BackendReply::success(stub_complete(chain, rules_));
}

void StubBackend::inject_failures(int count, FailureClass failure) {
  failure_.store(failure);
  pending_failures_.store(count);
}

// ---------------------------------------------------------------------------

nlohmann::json chat_request_body(const PromptChain& chain, const std::string& model) {
  nlohmann::json body;
  body["model"] = model;
  body["messages"] = nlohmann::json::array();
  for (const auto& m : chain.messages) body["messages"].push_back({{"role", to_string(m.role)}, {"content", m.text}});
  body["temperature"] = chain.sampling.temperature;
  return body;
}

std::string parse_chat_response(const std::string& body) {
  auto j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded()) return {};
  try {
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception&) {
    return {};
  }
}

FailureClass classify_status(int status) noexcept {
  if (status >= 200 && status < 300) return FailureClass::None;
  if (status == 401 || status == 403) return FailureClass::Auth;
  if (status == 429) return FailureClass::RateLimited;
  if (status == 408) return FailureClass::Timeout;
  return FailureClass::Backend;
}

// HttpChatBackend::send lives in http_backend.cpp (keeps httplib out of this TU).

// ---------------------------------------------------------------------------

Gateway::Gateway(std::shared_ptr<ChatBackend> backend, RetryPolicy policy, Sleeper sleeper, std::shared_ptr<Clock> clock)
    : backend_(std::move(backend)), policy_(policy), sleeper_(std::move(sleeper)), clock_(std::move(clock)) {
  if (!backend_) throw Error(ErrorKind::ConfigError, "gateway needs a backend");
  if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  if (!clock_) clock_ = std::make_shared<SystemClock>();
}

CompletionResult Gateway::complete(const CompletionRequest& request) const {
  if (request.timeout.count() <= 0) throw Error(ErrorKind::InvalidCommand, "timeout must be positive");
  if (request.retry_budget < 0) throw Error(ErrorKind::InvalidCommand, "retry budget must be non-negative");

  const auto started = clock_->now_ms();
  auto backoff = policy_.initial_backoff;
  for (int attempt = 0;; ++attempt) {
    BackendReply reply = backend_->send(request.chain, request.timeout);
    if (reply.ok() && reply.text.empty()) reply = BackendReply::fail(FailureClass::Backend, reply.status, "empty response");
    switch (reply.failure) {
      case FailureClass::None:
        return {std::move(reply.text), backend_->id(), clock_->now_ms() - started, request.chain.sampling, attempt};
      case FailureClass::Auth:
        throw Error(ErrorKind::AuthFailed, reply.detail);
      case FailureClass::Backend:
        throw BackendFailure(reply.status, reply.detail);
      case FailureClass::Transport:
      case FailureClass::Timeout:
      case FailureClass::RateLimited:
        break;
    }
    if (attempt >= request.retry_budget) {
      if (reply.failure == FailureClass::Timeout) throw Error(ErrorKind::Timeout, reply.detail);
      if (reply.failure == FailureClass::RateLimited) throw Error(ErrorKind::RateLimited, reply.detail);
      throw BackendFailure(reply.status, "transport: " + reply.detail);
    }
    sleeper_(backoff);
    backoff = std::chrono::milliseconds(static_cast<std::int64_t>(backoff.count() * policy_.multiplier));
  }
}

}  // namespace memetic
