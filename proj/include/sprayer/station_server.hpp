#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <future>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "sprayer/config.hpp"
#include "sprayer/sim.hpp"

namespace sprayer {

struct ServeOptions {
  int port = 0;  // 0 picks a free port
  std::string bind_address = "127.0.0.1";
  RobotConfig config;
  FieldSpec field;
  double dt = 0.05;
  double pace = 1.0;  // simulated seconds per wall second
  int telemetry_divisor = 4;
  int coverage_divisor = 20;
  std::size_t subscriber_queue = 256;  // frames buffered per slow subscriber
};

// Live teleoperation service on one TCP port. A client picks its role with
// its first line:
//
//   CONTROL      then raw command bytes, exactly as the phone app sends them
//   DIRECTIVES   then one directive per line, answered with OK/ERR lines
//   TELEMETRY    then receives one JSON frame per line
//
// or with an HTTP WebSocket upgrade on /control, /directives or /telemetry
// (same payloads, one message per frame). Only one control link may be open.
// Every input is queued to the single simulation thread and applied at the
// next tick boundary through Simulation::apply, so a recorded session
// replays through the script runner to the same report.
class StationServer {
 public:
  explicit StationServer(ServeOptions opts);
  ~StationServer();

  StationServer(const StationServer&) = delete;
  StationServer& operator=(const StationServer&) = delete;

  // Binds and starts all threads; returns the bound port. Throws
  // std::runtime_error if the port cannot be bound.
  int start();

  // Applies inputs already queued at the current tick, then halts the
  // simulation and closes every connection. Idempotent.
  void stop();

  bool running() const { return running_.load(); }

  // Valid after stop().
  MissionReport report() const;

  // Session log in script format: every applied input at its tick, then END.
  std::string recorded_script() const;

  std::int64_t current_tick() const { return tick_.load(); }

 private:
  struct Input {
    enum class Kind { Bytes, Directive, ControlLink } kind;
    std::string payload;
    bool connected = false;  // ControlLink
    std::shared_ptr<std::promise<std::string>> reply;
  };

  struct Subscriber {
    int fd = -1;
    bool websocket = false;
    std::mutex mu;
    std::condition_variable cv;
    std::deque<std::string> queue;
    bool closed = false;
    std::uint64_t dropped = 0;
  };

  void accept_loop();
  void sim_loop();
  void handle_connection(int fd);
  void serve_control(int fd, std::string pending, bool websocket);
  void serve_directives(int fd, std::string pending, bool websocket);
  void serve_telemetry(int fd, bool websocket);
  std::string submit_directive(const std::string& line);
  void push_input(Input in);
  void publish(const std::string& message);
  void apply_input(Input& in);
  void record(const std::string& action_text);

  ServeOptions opts_;
  int listen_fd_ = -1;
  std::atomic<bool> running_{false};
  std::atomic<bool> stopping_{false};
  std::atomic<std::int64_t> tick_{0};

  std::mutex input_mu_;
  std::condition_variable input_cv_;
  std::deque<Input> inputs_;

  std::mutex control_mu_;
  bool control_taken_ = false;

  std::mutex subs_mu_;
  std::vector<std::shared_ptr<Subscriber>> subscribers_;

  std::mutex conn_mu_;
  std::vector<int> open_fds_;
  std::vector<std::thread> conn_threads_;

  std::thread accept_thread_;
  std::thread sim_thread_;

  // Owned by the simulation thread while running.
  std::unique_ptr<Simulation> sim_;
  bool control_connected_ = false;
  std::vector<std::string> record_;
  std::string last_coverage_;

  mutable std::mutex result_mu_;
  std::string latest_frame_;
  std::string latest_coverage_;
};

// Base64-encoded SHA-1 accept token for a WebSocket handshake key.
std::string websocket_accept_key(const std::string& client_key);

// Encodes one unmasked server-to-client frame (opcode 1 text, 2 binary).
std::string websocket_frame(std::string_view payload, int opcode = 1);

}  // namespace sprayer
