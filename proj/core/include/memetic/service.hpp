#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>

#include "memetic/console.hpp"

namespace memetic {

struct ServerOptions {
  std::string address = "127.0.0.1";
  std::uint16_t port = 8080;  // 0 picks a free port
  // Outbound WebSocket messages queued per client before it is dropped.
  std::size_t max_queued_messages = 512;
};

/// HTTP + WebSocket front end for a Console.
///
///   GET /state        full state document
///   GET /config       surface and preset definitions
///   GET /session/log  JSONL session log
///   GET /ws           WebSocket: Command records in, Event records out
class ConsoleServer {
 public:
  /// Binds immediately; throws if the address is unavailable.
  ConsoleServer(Console& console, ServerOptions options);
  ~ConsoleServer();

  ConsoleServer(const ConsoleServer&) = delete;
  ConsoleServer& operator=(const ConsoleServer&) = delete;

  /// Serves on a background thread.
  void start();
  /// Runs on the calling thread until stop() is called (or a signal arrives
  /// when handle_signals is set).
  void run(bool handle_signals);
  void stop();

  std::uint16_t port() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace memetic
