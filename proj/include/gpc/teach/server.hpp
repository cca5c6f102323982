#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>

#include <json.hpp>

namespace gpc::teach {

struct ServerOptions {
  std::string address = "127.0.0.1";
  unsigned short port = 8765;  // 0 picks a free port
  nlohmann::json base_config = nlohmann::json::object();  // handshake overlays go on top
  std::string snapshot_dir;                               // empty: no session artifacts
  int threads = 1;
};

// WebSocket teaching server. Each connection is one session: the first
// message must be {"type": "handshake", "protocol_version": 1,
// "session_config": {...}}; afterwards the session loop ticks at the
// session's step rate and every client message gets an ack or an error.
class TeachServer {
 public:
  // Binds immediately; throws UsageError when the address cannot be bound.
  explicit TeachServer(const ServerOptions& options);
  ~TeachServer();

  unsigned short port() const;
  // Serves until stop(); may be called from one thread only.
  void run();
  // Safe from any thread.
  void stop();
  std::uint64_t sessions_started() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gpc::teach
