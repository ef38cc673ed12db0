#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "fencing/live_session.hpp"

namespace fencing {

struct ServerOptions {
  std::string address = "127.0.0.1";
  unsigned short port = 8765;  // 0 picks a free port
  GameConfig config;
  AgentFactory protagonist;
  std::string protagonist_id;
  std::uint64_t seed = 0;    // connection n plays with derive_seed(seed, n)
  std::string record_dir;    // empty: keep records in memory only
  double tick_hz = 100.0;
  bool stop_on_signals = false;  // SIGINT/SIGTERM end run()
  std::function<void(const GameRecord&)> on_record;  // called on the server thread
};

/// WebSocket game server. One io_context thread owns every session; each
/// connection gets its own LiveSession and tick timer.
class LiveServer {
 public:
  explicit LiveServer(ServerOptions options);
  ~LiveServer();
  LiveServer(const LiveServer&) = delete;
  LiveServer& operator=(const LiveServer&) = delete;

  unsigned short port() const;
  /// Blocks until stop() is called.
  void run();
  /// Thread-safe.
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fencing
