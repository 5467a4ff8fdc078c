#include "sprayer/station_server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstring>
#include <stdexcept>

#include "sprayer/coverage_export.hpp"
#include "sprayer/script.hpp"
#include "sprayer/telemetry.hpp"
#include "sprayer/text_util.hpp"

namespace sprayer {

namespace {

constexpr const char* kWebSocketGuid = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";

bool send_all(int fd, std::string_view data) {
  while (!data.empty()) {
    ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n <= 0) {
      if (n < 0 && errno == EINTR) continue;
      return false;
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

// Buffered reads over a blocking socket.
class Reader {
 public:
  explicit Reader(int fd, std::string pending = {}) : fd_(fd), buf_(std::move(pending)) {}

  // Reads up to and excluding '\n' (a trailing '\r' is dropped).
  bool read_line(std::string& line, std::size_t max = 8192) {
    for (;;) {
      auto nl = buf_.find('\n');
      if (nl != std::string::npos) {
        line = buf_.substr(0, nl);
        buf_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
      }
      if (buf_.size() > max) return false;
      if (!fill()) return false;
    }
  }

  bool read_exact(std::size_t n, std::string& out) {
    while (buf_.size() < n)
      if (!fill()) return false;
    out = buf_.substr(0, n);
    buf_.erase(0, n);
    return true;
  }

  // Returns whatever is buffered, or blocks for at least one byte.
  bool read_some(std::string& out) {
    if (buf_.empty() && !fill()) return false;
    out.swap(buf_);
    buf_.clear();
    return true;
  }

  std::string take_buffer() {
    std::string b;
    b.swap(buf_);
    return b;
  }

 private:
  bool fill() {
    char tmp[4096];
    for (;;) {
      ssize_t n = ::recv(fd_, tmp, sizeof tmp, 0);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) return false;
      buf_.append(tmp, static_cast<std::size_t>(n));
      return true;
    }
  }

  int fd_;
  std::string buf_;
};

// Reads one client frame, answering pings. Returns false on close or error.
bool read_ws_message(Reader& r, int fd, std::string& payload, int& opcode) {
  payload.clear();
  for (;;) {
    std::string hdr;
    if (!r.read_exact(2, hdr)) return false;
    const auto b0 = static_cast<unsigned char>(hdr[0]);
    const auto b1 = static_cast<unsigned char>(hdr[1]);
    const bool fin = b0 & 0x80;
    const int op = b0 & 0x0f;
    const bool masked = b1 & 0x80;
    std::uint64_t len = b1 & 0x7f;
    std::string ext;
    if (len == 126) {
      if (!r.read_exact(2, ext)) return false;
      len = (static_cast<unsigned char>(ext[0]) << 8) | static_cast<unsigned char>(ext[1]);
    } else if (len == 127) {
      if (!r.read_exact(8, ext)) return false;
      len = 0;
      for (char c : ext) len = (len << 8) | static_cast<unsigned char>(c);
    }
    if (len > (1u << 20)) return false;
    std::string mask;
    if (masked && !r.read_exact(4, mask)) return false;
    std::string data;
    if (!r.read_exact(static_cast<std::size_t>(len), data)) return false;
    if (masked)
      for (std::size_t i = 0; i < data.size(); ++i) data[i] = static_cast<char>(data[i] ^ mask[i % 4]);

    if (op == 0x8) {
      send_all(fd, websocket_frame(data.substr(0, std::min<std::size_t>(data.size(), 2)), 0x8));
      return false;
    }
    if (op == 0x9) {
      send_all(fd, websocket_frame(data, 0xA));
      continue;
    }
    if (op == 0xA) continue;
    if (op != 0x0) opcode = op;
    payload += data;
    if (fin) return true;
  }
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string format_tick_time(std::int64_t tick, double dt) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(tick) * dt);
  return buf;
}

}  // namespace

std::string websocket_accept_key(const std::string& client_key) {
  const std::string src = client_key + kWebSocketGuid;
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(src.data()), src.size(), digest);
  unsigned char out[4 * ((SHA_DIGEST_LENGTH + 2) / 3) + 1];
  const int n = EVP_EncodeBlock(out, digest, SHA_DIGEST_LENGTH);
  return std::string(reinterpret_cast<char*>(out), static_cast<std::size_t>(n));
}

std::string websocket_frame(std::string_view payload, int opcode) {
  std::string f;
  f.push_back(static_cast<char>(0x80 | (opcode & 0x0f)));
  const std::size_t n = payload.size();
  if (n < 126) {
    f.push_back(static_cast<char>(n));
  } else if (n < 65536) {
    f.push_back(static_cast<char>(126));
    f.push_back(static_cast<char>((n >> 8) & 0xff));
    f.push_back(static_cast<char>(n & 0xff));
  } else {
    f.push_back(static_cast<char>(127));
    for (int shift = 56; shift >= 0; shift -= 8) f.push_back(static_cast<char>((n >> shift) & 0xff));
  }
  f.append(payload);
  return f;
}

StationServer::StationServer(ServeOptions opts) : opts_(std::move(opts)) {
  if (!(opts_.pace > 0.0)) throw std::invalid_argument("pace must be > 0");
  if (opts_.telemetry_divisor <= 0 || opts_.coverage_divisor <= 0)
    throw std::invalid_argument("telemetry divisors must be > 0");
  sim_ = std::make_unique<Simulation>(opts_.config, opts_.field, opts_.dt);
}

StationServer::~StationServer() { stop(); }

int StationServer::start() {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw std::runtime_error("socket() failed");
  int yes = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(opts_.port));
  if (::inet_pton(AF_INET, opts_.bind_address.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    throw std::runtime_error("bad bind address '" + opts_.bind_address + "'");
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(listen_fd_, 16) < 0) {
    const std::string why = std::strerror(errno);
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw std::runtime_error("cannot listen on port " + std::to_string(opts_.port) + ": " + why);
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  running_ = true;
  {
    std::lock_guard lk(result_mu_);
    latest_frame_ = frame_to_json(make_frame(*sim_, {false}));
    latest_coverage_ = coverage_json(sim_->state().grid, sim_->state().t);
  }
  sim_thread_ = std::thread([this] { sim_loop(); });
  accept_thread_ = std::thread([this] { accept_loop(); });
  return ntohs(addr.sin_port);
}

void StationServer::stop() {
  if (stopping_.exchange(true)) {
    if (sim_thread_.joinable()) sim_thread_.join();
    return;
  }
  input_cv_.notify_all();
  if (sim_thread_.joinable()) sim_thread_.join();
  if (accept_thread_.joinable()) accept_thread_.join();
  if (listen_fd_ >= 0) {
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
  {
    std::lock_guard lk(subs_mu_);
    for (auto& s : subscribers_) {
      std::lock_guard sl(s->mu);
      s->closed = true;
      s->cv.notify_all();
    }
  }
  std::vector<std::thread> threads;
  {
    std::lock_guard lk(conn_mu_);
    for (int fd : open_fds_) ::shutdown(fd, SHUT_RDWR);
    threads.swap(conn_threads_);
  }
  for (auto& t : threads)
    if (t.joinable()) t.join();
  running_ = false;
}

void StationServer::accept_loop() {
  while (!stopping_) {
    pollfd p{listen_fd_, POLLIN, 0};
    int r = ::poll(&p, 1, 100);
    if (r <= 0) continue;
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    int yes = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &yes, sizeof yes);
    std::lock_guard lk(conn_mu_);
    if (stopping_) {
      ::close(fd);
      break;
    }
    open_fds_.push_back(fd);
    conn_threads_.emplace_back([this, fd] {
      handle_connection(fd);
      {
        std::lock_guard l(conn_mu_);
        open_fds_.erase(std::remove(open_fds_.begin(), open_fds_.end(), fd), open_fds_.end());
      }
      ::close(fd);
    });
  }
}

void StationServer::handle_connection(int fd) {
  Reader r(fd);
  std::string first;
  if (!r.read_line(first)) return;
  const std::string role = upper(trim(first));

  if (role.rfind("GET ", 0) == 0) {
    auto parts = split_ws(first);
    const std::string path = parts.size() >= 2 ? std::string(parts[1]) : "";
    std::string key;
    bool upgrade = false;
    std::string line;
    while (r.read_line(line) && !line.empty()) {
      auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      const std::string name = lower(std::string(trim(std::string_view(line).substr(0, colon))));
      const std::string value(trim(std::string_view(line).substr(colon + 1)));
      if (name == "sec-websocket-key") key = value;
      if (name == "upgrade" && lower(value) == "websocket") upgrade = true;
    }
    if (!upgrade || key.empty() || (path != "/control" && path != "/directives" && path != "/telemetry")) {
      send_all(fd, "HTTP/1.1 400 Bad Request\r\nContent-Length: 0\r\nConnection: close\r\n\r\n");
      return;
    }
    if (path == "/control") {
      std::lock_guard lk(control_mu_);
      if (control_taken_) {
        send_all(fd, "HTTP/1.1 409 Conflict\r\nContent-Type: text/plain\r\nContent-Length: 28\r\n"
                     "Connection: close\r\n\r\ncontrol link already in use\n");
        return;
      }
    }
    send_all(fd, "HTTP/1.1 101 Switching Protocols\r\nUpgrade: websocket\r\nConnection: Upgrade\r\n"
                 "Sec-WebSocket-Accept: " +
                     websocket_accept_key(key) + "\r\n\r\n");
    if (path == "/control")
      serve_control(fd, r.take_buffer(), true);
    else if (path == "/directives")
      serve_directives(fd, r.take_buffer(), true);
    else
      serve_telemetry(fd, true);
    return;
  }

  if (role == "CONTROL") {
    serve_control(fd, r.take_buffer(), false);
  } else if (role == "DIRECTIVES") {
    serve_directives(fd, r.take_buffer(), false);
  } else if (role == "TELEMETRY") {
    serve_telemetry(fd, false);
  } else {
    send_all(fd, "ERR unknown role '" + std::string(trim(first)) + "' (CONTROL|DIRECTIVES|TELEMETRY)\n");
  }
}

void StationServer::serve_control(int fd, std::string pending, bool websocket) {
  {
    std::lock_guard lk(control_mu_);
    if (control_taken_) {
      const std::string msg = "ERR control link already in use\n";
      send_all(fd, websocket ? websocket_frame(msg) : msg);
      return;
    }
    control_taken_ = true;
  }
  push_input({Input::Kind::ControlLink, {}, true, nullptr});
  if (!websocket) send_all(fd, "OK control\n");

  Reader r(fd, std::move(pending));
  std::string chunk;
  int opcode = 2;
  while (!stopping_) {
    bool ok = websocket ? read_ws_message(r, fd, chunk, opcode) : r.read_some(chunk);
    if (!ok) break;
    if (!chunk.empty()) push_input({Input::Kind::Bytes, chunk, false, nullptr});
  }
  push_input({Input::Kind::ControlLink, {}, false, nullptr});
  std::lock_guard lk(control_mu_);
  control_taken_ = false;
}

void StationServer::serve_directives(int fd, std::string pending, bool websocket) {
  Reader r(fd, std::move(pending));
  if (!websocket) send_all(fd, "OK directives\n");
  while (!stopping_) {
    std::vector<std::string> lines;
    if (websocket) {
      std::string msg;
      int opcode = 1;
      if (!read_ws_message(r, fd, msg, opcode)) break;
      for (auto l : split_lines(msg)) lines.emplace_back(l);
    } else {
      std::string line;
      if (!r.read_line(line)) break;
      lines.push_back(std::move(line));
    }
    for (const auto& line : lines) {
      if (trim(strip_comment(line)).empty()) continue;
      const std::string reply = submit_directive(line) + "\n";
      if (!send_all(fd, websocket ? websocket_frame(reply) : reply)) return;
    }
  }
}

void StationServer::serve_telemetry(int fd, bool websocket) {
  auto sub = std::make_shared<Subscriber>();
  sub->fd = fd;
  sub->websocket = websocket;
  {
    std::lock_guard lk(result_mu_);
    sub->queue.push_back(latest_coverage_);
    sub->queue.push_back(latest_frame_);
  }
  {
    std::lock_guard lk(subs_mu_);
    subscribers_.push_back(sub);
  }
  for (;;) {
    std::string msg;
    {
      std::unique_lock lk(sub->mu);
      sub->cv.wait(lk, [&] { return sub->closed || !sub->queue.empty(); });
      if (sub->queue.empty()) break;
      msg = std::move(sub->queue.front());
      sub->queue.pop_front();
    }
    msg += '\n';
    if (!send_all(fd, websocket ? websocket_frame(msg) : msg)) break;
  }
  std::lock_guard lk(subs_mu_);
  subscribers_.erase(std::remove(subscribers_.begin(), subscribers_.end(), sub), subscribers_.end());
}

std::string StationServer::submit_directive(const std::string& line) {
  auto promise = std::make_shared<std::promise<std::string>>();
  auto fut = promise->get_future();
  push_input({Input::Kind::Directive, line, false, promise});
  return fut.get();
}

void StationServer::push_input(Input in) {
  std::unique_lock lk(input_mu_);
  if (!running_ || stopping_) {
    lk.unlock();
    if (in.reply) in.reply->set_value("ERR station stopped");
    return;
  }
  inputs_.push_back(std::move(in));
  lk.unlock();
  input_cv_.notify_all();
}

void StationServer::publish(const std::string& message) {
  std::lock_guard lk(subs_mu_);
  for (auto& s : subscribers_) {
    std::lock_guard sl(s->mu);
    s->queue.push_back(message);
    while (s->queue.size() > opts_.subscriber_queue) {
      s->queue.pop_front();
      ++s->dropped;
    }
    s->cv.notify_one();
  }
}

void StationServer::record(const std::string& action_text) {
  record_.push_back(format_tick_time(sim_->tick(), sim_->dt()) + " " + action_text);
}

void StationServer::apply_input(Input& in) {
  switch (in.kind) {
    case Input::Kind::ControlLink:
      control_connected_ = in.connected;
      return;
    case Input::Kind::Bytes: {
      Action a = Action::send(in.payload);
      sim_->apply(a);
      record(format_action(a));
      return;
    }
    case Input::Kind::Directive: {
      std::string text(trim(strip_comment(in.payload)));
      std::string reply;
      if (upper(text) == "RESET") {
        sim_ = std::make_unique<Simulation>(opts_.config, opts_.field, opts_.dt);
        record_.clear();
        reply = "OK 0";
      } else {
        try {
          Action a = parse_action(text);
          if (a.kind == ActionKind::Send) throw ScriptError(0, "bytes go over the control link, not directives");
          sim_->apply(a);
          record(text);
          reply = "OK " + std::to_string(sim_->tick());
        } catch (const std::exception& e) {
          reply = std::string("ERR ") + e.what();
        }
      }
      if (in.reply) in.reply->set_value(reply);
      return;
    }
  }
}

void StationServer::sim_loop() {
  using clock = std::chrono::steady_clock;
  const auto period = std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(opts_.dt / opts_.pace));
  auto deadline = clock::now();

  auto drain = [this] {
    std::deque<Input> batch;
    {
      std::lock_guard lk(input_mu_);
      batch.swap(inputs_);
    }
    for (auto& in : batch) apply_input(in);
  };

  while (!stopping_) {
    drain();
    sim_->step();
    tick_ = sim_->tick();
    if (sim_->tick() % opts_.telemetry_divisor == 0) {
      std::string frame = frame_to_json(make_frame(*sim_, {control_connected_}));
      {
        std::lock_guard lk(result_mu_);
        latest_frame_ = frame;
      }
      publish(frame);
    }
    if (sim_->tick() % opts_.coverage_divisor == 0) {
      std::string cov = coverage_json(sim_->state().grid, sim_->state().t);
      {
        std::lock_guard lk(result_mu_);
        latest_coverage_ = cov;
      }
      publish(cov);
    }
    deadline += period;
    std::unique_lock lk(input_mu_);
    input_cv_.wait_until(lk, deadline, [this] { return stopping_.load(); });
  }

  // Final boundary: whatever already arrived is applied at the current tick.
  std::deque<Input> rest;
  {
    std::lock_guard lk(input_mu_);
    rest.swap(inputs_);
    running_ = false;
  }
  for (auto& in : rest) apply_input(in);
  std::lock_guard lk(result_mu_);
  latest_frame_ = frame_to_json(make_frame(*sim_, {control_connected_}));
}

MissionReport StationServer::report() const { return sim_->report(); }

std::string StationServer::recorded_script() const {
  std::string out = "# recorded live session; replay with the same --config, --field, --cell and --dt\n";
  for (const auto& l : record_) out += l + "\n";
  out += format_tick_time(sim_->tick(), sim_->dt()) + " END\n";
  return out;
}

}  // namespace sprayer
