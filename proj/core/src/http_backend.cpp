#include <cstdlib>

#include <httplib.h>

#include "memetic/llm_gateway.hpp"

namespace memetic {

BackendReply HttpChatBackend::send(const PromptChain& chain, std::chrono::milliseconds timeout) {
  const char* credential = std::getenv(config_.credential_env.c_str());
  if (!credential || !*credential)
    return BackendReply::fail(FailureClass::Auth, 0, "credential variable " + config_.credential_env + " is not set");

  httplib::Client client(config_.endpoint);
  if (!client.is_valid()) return BackendReply::fail(FailureClass::Backend, 0, "unsupported endpoint " + config_.endpoint);

  auto secs = timeout.count() / 1000;
  auto usecs = (timeout.count() % 1000) * 1000;
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  httplib::Headers headers{{"Authorization", std::string("Bearer ") + credential}};
  auto res = client.Post(config_.path, headers, chat_request_body(chain, config_.model).dump(), "application/json");
  if (!res) {
    auto err = res.error();
    auto f = (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read) ? FailureClass::Timeout
                                                                                        : FailureClass::Transport;
    return BackendReply::fail(f, 0, httplib::to_string(err));
  }
  auto f = classify_status(res->status);
  if (f != FailureClass::None) return BackendReply::fail(f, res->status, "HTTP " + std::to_string(res->status));
  auto text = parse_chat_response(res->body);
  if (text.empty()) return BackendReply::fail(FailureClass::Backend, res->status, "malformed response body");
  return BackendReply::success(std::move(text));
}

}  // namespace memetic
