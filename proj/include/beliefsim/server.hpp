#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "beliefsim/config.hpp"

namespace beliefsim {

/// The server could not start (for example, the port is taken).
class ServerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Live simulation over HTTP and websocket.
///
///   GET /ws      websocket: snapshots out, control commands in
///   GET /config  active configuration
///   GET /health  run status
///   GET /record  launch config, seed and command log (replayable)
///
/// One simulation thread ticks the session `frame_hz` times per wall second,
/// advancing `steps_per_frame * speed multiplier` steps per frame and
/// broadcasting one snapshot per frame. Each client has a bounded send queue;
/// a client whose queue overflows is disconnected.
class StreamServer {
 public:
  struct Options {
    std::string address = "127.0.0.1";
    std::uint16_t port = 8080;  // 0 picks a free port
    double frame_hz = 20.0;
    double steps_per_frame = 1.0;
    std::pair<int, int> projection{0, 1};
    std::size_t max_queue = 64;
    std::filesystem::path static_dir;  // served for other GET paths when set
    std::filesystem::path record_path; // session record written here on stop when set
  };

  /// Binds the listening socket. Throws ServerError if it cannot.
  StreamServer(ExperimentConfig config, std::uint64_t seed, Options options);
  ~StreamServer();
  StreamServer(const StreamServer&) = delete;
  StreamServer& operator=(const StreamServer&) = delete;

  std::uint16_t port() const;

  /// Start the network and simulation threads.
  void start();
  /// Stop both threads and close every connection. Idempotent.
  void stop();

  std::size_t client_count() const;
  nlohmann::json health() const;
  nlohmann::json record() const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

}  // namespace beliefsim
