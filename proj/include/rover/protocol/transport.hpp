#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rover::proto {

struct ReadResult {
  std::size_t bytes = 0;
  bool peer_closed = false;
};

/// Reliable, ordered byte stream (TCP or an in-process stand-in).
class ByteStream {
 public:
  virtual ~ByteStream() = default;

  /// Writes every byte. Throws ProtocolError{PeerGone} when the stream is broken.
  virtual void write(std::span<const std::uint8_t> bytes) = 0;

  /// Non-blocking read of whatever is available (possibly nothing).
  virtual ReadResult read_some(std::span<std::uint8_t> out) = 0;

  virtual void close() = 0;
};

/// Shared switch standing in for a radio link; while down, whole writes are
/// silently lost.
struct LinkGate {
  std::atomic<bool> up{true};
};

/// Two connected in-memory stream endpoints.
std::pair<std::unique_ptr<ByteStream>, std::unique_ptr<ByteStream>> make_loopback_pair(
    std::shared_ptr<LinkGate> gate = nullptr);

class TcpStream final : public ByteStream {
 public:
  explicit TcpStream(int fd);
  ~TcpStream() override;
  TcpStream(const TcpStream&) = delete;
  TcpStream& operator=(const TcpStream&) = delete;

  void write(std::span<const std::uint8_t> bytes) override;
  ReadResult read_some(std::span<std::uint8_t> out) override;
  void close() override;

  /// Blocks until readable or `timeout_ms` elapses.
  bool wait_readable(int timeout_ms) const;

  /// Peer address as "host", without port.
  std::string peer_host() const;

 private:
  int fd_;
};

/// Connects to host:port. Throws std::runtime_error on failure.
std::unique_ptr<TcpStream> tcp_connect(const std::string& host, std::uint16_t port,
                                       int timeout_ms = 3000);

class TcpListener {
 public:
  /// Binds to `port` on all interfaces; port 0 picks an ephemeral port.
  explicit TcpListener(std::uint16_t port, const std::string& bind_host = "0.0.0.0");
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  std::uint16_t port() const { return port_; }

  /// Waits up to `timeout_ms` for a connection.
  std::unique_ptr<TcpStream> accept(int timeout_ms);

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

/// Connectionless channel carrying whole frames, one per datagram.
class DatagramChannel {
 public:
  virtual ~DatagramChannel() = default;
  virtual void send(std::span<const std::uint8_t> datagram) = 0;
  /// Non-blocking; nullopt when nothing is queued.
  virtual std::optional<std::vector<std::uint8_t>> receive() = 0;
};

/// In-memory datagram pair. `drop` is consulted for every datagram sent in
/// either direction; returning true loses it.
std::pair<std::unique_ptr<DatagramChannel>, std::unique_ptr<DatagramChannel>> make_datagram_pair(
    std::function<bool()> drop = nullptr);

class UdpSocket final : public DatagramChannel {
 public:
  /// Receiving socket bound to `port` (0 = ephemeral).
  static std::unique_ptr<UdpSocket> bind(std::uint16_t port, const std::string& host = "0.0.0.0");
  /// Sending socket with a fixed destination.
  static std::unique_ptr<UdpSocket> connect(const std::string& host, std::uint16_t port);

  ~UdpSocket() override;
  UdpSocket(const UdpSocket&) = delete;
  UdpSocket& operator=(const UdpSocket&) = delete;

  void send(std::span<const std::uint8_t> datagram) override;
  std::optional<std::vector<std::uint8_t>> receive() override;
  bool wait_readable(int timeout_ms) const;
  std::uint16_t local_port() const;

 private:
  explicit UdpSocket(int fd) : fd_(fd) {}
  int fd_;
};

}  // namespace rover::proto
