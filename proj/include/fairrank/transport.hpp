#pragma once

#include <condition_variable>
#include <cstdint>
#include <cstring>
#include <deque>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include "fairrank/ring.hpp"
#include "fairrank/sharing.hpp"

namespace fairrank::mpc {

// Ordered, reliable, exactly-once message channel between the two servers.
// Protocol steps always send before they receive, so a single-threaded
// lockstep driver never blocks on either implementation.
class Endpoint {
 public:
  virtual ~Endpoint() = default;
  virtual void send(const std::vector<RingElement>& frame) = 0;
  virtual std::vector<RingElement> recv() = 0;
};

using EndpointPair = std::pair<std::unique_ptr<Endpoint>, std::unique_ptr<Endpoint>>;

namespace detail {

struct InprocQueues {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<std::vector<RingElement>> to0;  // frames addressed to party 0
  std::deque<std::vector<RingElement>> to1;
};

class InprocEndpoint final : public Endpoint {
 public:
  InprocEndpoint(std::shared_ptr<InprocQueues> q, int party)
      : q_(std::move(q)), party_(party) {}

  void send(const std::vector<RingElement>& frame) override {
    {
      std::lock_guard lk(q_->mu);
      (party_ == 0 ? q_->to1 : q_->to0).push_back(frame);
    }
    q_->cv.notify_all();
  }

  std::vector<RingElement> recv() override {
    std::unique_lock lk(q_->mu);
    auto& inbox = party_ == 0 ? q_->to0 : q_->to1;
    q_->cv.wait(lk, [&] { return !inbox.empty(); });
    auto frame = std::move(inbox.front());
    inbox.pop_front();
    return frame;
  }

 private:
  std::shared_ptr<InprocQueues> q_;
  int party_;
};

// Wire format: 4-byte big-endian payload byte count, then the ring words as
// little-endian 64-bit integers.
inline std::vector<std::uint8_t> encode_frame(const std::vector<RingElement>& frame) {
  const std::uint32_t payload_len = static_cast<std::uint32_t>(frame.size() * 8);
  std::vector<std::uint8_t> out;
  out.reserve(4 + payload_len);
  out.push_back(static_cast<std::uint8_t>(payload_len >> 24));
  out.push_back(static_cast<std::uint8_t>(payload_len >> 16));
  out.push_back(static_cast<std::uint8_t>(payload_len >> 8));
  out.push_back(static_cast<std::uint8_t>(payload_len));
  for (RingElement e : frame)
    for (int b = 0; b < 8; ++b)
      out.push_back(static_cast<std::uint8_t>(e.v >> (8 * b)));
  return out;
}

inline std::vector<RingElement> decode_payload(std::span<const std::uint8_t> payload) {
  if (payload.size() % 8 != 0)
    throw ProtocolError("transport: payload is not a whole number of ring words");
  std::vector<RingElement> frame(payload.size() / 8);
  for (std::size_t i = 0; i < frame.size(); ++i) {
    std::uint64_t v = 0;
    for (int b = 7; b >= 0; --b) v = (v << 8) | payload[i * 8 + b];
    frame[i].v = v;
  }
  return frame;
}

inline std::vector<RingElement> decode_frame(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw ProtocolError("transport: truncated frame header");
  const std::uint32_t payload_len = (std::uint32_t(bytes[0]) << 24) |
                                    (std::uint32_t(bytes[1]) << 16) |
                                    (std::uint32_t(bytes[2]) << 8) |
                                    std::uint32_t(bytes[3]);
  if (bytes.size() != 4 + std::size_t(payload_len))
    throw ProtocolError("transport: frame length does not match header");
  return decode_payload(bytes.subspan(4));
}

class TcpEndpoint final : public Endpoint {
 public:
  explicit TcpEndpoint(int fd) : fd_(fd) {}
  TcpEndpoint(const TcpEndpoint&) = delete;
  TcpEndpoint& operator=(const TcpEndpoint&) = delete;
  ~TcpEndpoint() override {
    if (fd_ >= 0) ::close(fd_);
  }

  void send(const std::vector<RingElement>& frame) override {
    const auto bytes = encode_frame(frame);
    write_all(bytes.data(), bytes.size());
  }

  std::vector<RingElement> recv() override {
    std::uint8_t header[4];
    read_all(header, 4);
    const std::uint32_t payload_len = (std::uint32_t(header[0]) << 24) |
                                      (std::uint32_t(header[1]) << 16) |
                                      (std::uint32_t(header[2]) << 8) |
    std::uint32_t(header[3]);
    std::vector<std::uint8_t> payload(payload_len);
    read_all(payload.data(), payload.size());
    return decode_payload(payload);
  }

 private:
  void write_all(const std::uint8_t* data, std::size_t len) {
    while (len > 0) {
      const ssize_t n = ::send(fd_, data, len, 0);
      if (n <= 0) throw ProtocolError("transport: tcp send failed: " +
                                      std::string(std::strerror(errno)));
      data += n;
      len -= static_cast<std::size_t>(n);
    }
  }

  void read_all(std::uint8_t* data, std::size_t len) {
    while (len > 0) {
      const ssize_t n = ::recv(fd_, data, len, 0);
      if (n == 0) throw ProtocolError("transport: peer closed the connection");
      if (n < 0) throw ProtocolError("transport: tcp recv failed: " +
                                     std::string(std::strerror(errno)));
      data += n;
      len -= static_cast<std::size_t>(n);
    }
  }

  int fd_ = -1;
};

}  // namespace detail

inline EndpointPair make_inproc_pair() {
  auto queues = std::make_shared<detail::InprocQueues>();
  return {std::make_unique<detail::InprocEndpoint>(queues, 0),
          std::make_unique<detail::InprocEndpoint>(queues, 1)};
}

// Loopback TCP link on an ephemeral port; both ends live in this process.
inline EndpointPair make_tcp_pair() {
  const int listener = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listener < 0) throw ProtocolError("transport: cannot create listener socket");

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;
  if (::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::listen(listener, 1) != 0) {
    ::close(listener);
    throw ProtocolError("transport: cannot bind loopback listener");
  }
  socklen_t len = sizeof(addr);
  if (::getsockname(listener, reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
    ::close(listener);
    throw ProtocolError("transport: getsockname failed");
  }

  const int client = ::socket(AF_INET, SOCK_STREAM, 0);
  if (client < 0) {
    ::close(listener);
    throw ProtocolError("transport: cannot create client socket");
  }
  // Loopback connect completes against the pending accept queue, so a single
  // thread can connect first and accept afterwards.
  if (::connect(client, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    ::close(listener);
    ::close(client);
    throw ProtocolError("transport: loopback connect failed");
  }
  const int accepted = ::accept(listener, nullptr, nullptr);
  ::close(listener);
  if (accepted < 0) {
    ::close(client);
    throw ProtocolError("transport: accept failed");
  }

  const int one = 1;
  ::setsockopt(client, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  ::setsockopt(accepted, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));

  return {std::make_unique<detail::TcpEndpoint>(client),
          std::make_unique<detail::TcpEndpoint>(accepted)};
}

inline EndpointPair make_endpoint_pair(bool tcp) {
  return tcp ? make_tcp_pair() : make_inproc_pair();
}

}  // namespace fairrank::mpc
