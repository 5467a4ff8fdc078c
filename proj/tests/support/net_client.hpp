#pragma once

// Minimal blocking TCP/WebSocket client for exercising the station service.

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace netclient {

class Conn {
 public:
  explicit Conn(int port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in a{};
    a.sin_family = AF_INET;
    a.sin_port = htons(static_cast<std::uint16_t>(port));
    ::inet_pton(AF_INET, "127.0.0.1", &a.sin_addr);
    if (::connect(fd_, reinterpret_cast<sockaddr*>(&a), sizeof a) < 0) throw std::runtime_error("connect failed");
    int yes = 1;
    ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &yes, sizeof yes);
  }
  ~Conn() { close(); }
  Conn(const Conn&) = delete;
  Conn& operator=(const Conn&) = delete;

  void close() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

  void send(const std::string& s) {
    std::size_t off = 0;
    while (off < s.size()) {
      auto n = ::send(fd_, s.data() + off, s.size() - off, MSG_NOSIGNAL);
      if (n <= 0) throw std::runtime_error("send failed");
      off += static_cast<std::size_t>(n);
    }
  }

  // Reads until '\n' (dropped) or the timeout; false on timeout or EOF.
  bool read_line(std::string& line, int timeout_ms = 3000) {
    auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
    for (;;) {
      auto nl = buf_.find('\n');
      if (nl != std::string::npos) {
        line = buf_.substr(0, nl);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        buf_.erase(0, nl + 1);
        return true;
      }
      if (!fill(deadline)) return false;
    }
  }

  bool read_exact(std::string& out, std::size_t n, int timeout_ms = 3000) {
    auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
    while (buf_.size() < n)
      if (!fill(deadline)) return false;
    out = buf_.substr(0, n);
    buf_.erase(0, n);
    return true;
  }

  // True once the peer has closed (EOF observed within the timeout).
  bool closed_by_peer(int timeout_ms = 3000) {
    auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
    for (;;) {
      pollfd p{fd_, POLLIN, 0};
      int left = static_cast<int>(
          std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now()).count());
      if (left <= 0) return false;
      if (::poll(&p, 1, left) <= 0) return false;
      char tmp[512];
      auto n = ::recv(fd_, tmp, sizeof tmp, 0);
      if (n <= 0) return true;
      buf_.append(tmp, static_cast<std::size_t>(n));
    }
  }

  // --- WebSocket (client side: frames are masked) ---
  bool ws_handshake(const std::string& path, std::string& status_line,
                    const std::string& key = "dGhlIHNhbXBsZSBub25jZQ==") {
    send("GET " + path + " HTTP/1.1\r\nHost: localhost\r\nUpgrade: websocket\r\nConnection: Upgrade\r\n"
         "Sec-WebSocket-Key: " + key + "\r\nSec-WebSocket-Version: 13\r\n\r\n");
    if (!read_line(status_line)) return false;
    std::string h;
    headers_.clear();
    while (read_line(h) && !h.empty()) headers_ += h + "\n";
    return status_line.find(" 101 ") != std::string::npos;
  }
  const std::string& headers() const { return headers_; }

  void ws_send(const std::string& payload, int opcode = 1) {
    std::string f;
    f.push_back(static_cast<char>(0x80 | opcode));
    const std::size_t n = payload.size();
    if (n < 126) {
      f.push_back(static_cast<char>(0x80 | n));
    } else {
      f.push_back(static_cast<char>(0x80 | 126));
      f.push_back(static_cast<char>((n >> 8) & 0xff));
      f.push_back(static_cast<char>(n & 0xff));
    }
    const unsigned char mask[4] = {0x12, 0x34, 0x56, 0x78};
    f.append(reinterpret_cast<const char*>(mask), 4);
    for (std::size_t k = 0; k < n; ++k) f.push_back(static_cast<char>(payload[k] ^ mask[k % 4]));
    send(f);
  }

  bool ws_read(std::string& payload, int& opcode, int timeout_ms = 3000) {
    std::string hdr;
    if (!read_exact(hdr, 2, timeout_ms)) return false;
    opcode = static_cast<unsigned char>(hdr[0]) & 0x0f;
    std::uint64_t n = static_cast<unsigned char>(hdr[1]) & 0x7f;
    if (n == 126) {
      std::string ext;
      if (!read_exact(ext, 2, timeout_ms)) return false;
      n = (static_cast<std::uint64_t>(static_cast<unsigned char>(ext[0])) << 8) | static_cast<unsigned char>(ext[1]);
    } else if (n == 127) {
      std::string ext;
      if (!read_exact(ext, 8, timeout_ms)) return false;
      n = 0;
      for (char c : ext) n = (n << 8) | static_cast<unsigned char>(c);
    }
    return read_exact(payload, static_cast<std::size_t>(n), timeout_ms);
  }

 private:
  bool fill(std::chrono::steady_clock::time_point deadline) {
    int left = static_cast<int>(
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now()).count());
    if (left <= 0) return false;
    pollfd p{fd_, POLLIN, 0};
    if (::poll(&p, 1, left) <= 0) return false;
    char tmp[4096];
    auto n = ::recv(fd_, tmp, sizeof tmp, 0);
    if (n <= 0) return false;
    buf_.append(tmp, static_cast<std::size_t>(n));
    return true;
  }

  int fd_ = -1;
  std::string buf_;
  std::string headers_;
};

}  // namespace netclient
