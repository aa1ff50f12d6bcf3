#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>

#include "rover/protocol/codec.hpp"
#include "rover/protocol/transport.hpp"

namespace rover::proto {

namespace {

std::runtime_error sys_error(const std::string& what) {
  return std::runtime_error(what + ": " + std::strerror(errno));
}

bool poll_fd(int fd, short events, int timeout_ms) {
  pollfd p{fd, events, 0};
  int rc;
  do {
    rc = ::poll(&p, 1, timeout_ms);
  } while (rc < 0 && errno == EINTR);
  return rc > 0;
}

sockaddr_in resolve_ipv4(const std::string& host, std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  addrinfo* res = nullptr;
  if (int rc = ::getaddrinfo(host.c_str(), nullptr, &hints, &res); rc != 0 || res == nullptr)
    throw std::runtime_error("cannot resolve " + host + ": " + ::gai_strerror(rc));
  sockaddr_in addr = *reinterpret_cast<sockaddr_in*>(res->ai_addr);
  ::freeaddrinfo(res);
  addr.sin_port = htons(port);
  return addr;
}

std::uint16_t bound_port(int fd) {
  sockaddr_in addr{};
  socklen_t len = sizeof addr;
  if (::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len) != 0) throw sys_error("getsockname");
  return ntohs(addr.sin_port);
}

}  // namespace

TcpStream::TcpStream(int fd) : fd_(fd) {
  int one = 1;
  ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

TcpStream::~TcpStream() { close(); }

void TcpStream::write(std::span<const std::uint8_t> bytes) {
  std::size_t sent = 0;
  while (sent < bytes.size()) {
    if (fd_ < 0) throw ProtocolError(ProtocolErrc::PeerGone, "stream closed");
    const ssize_t n = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      if (errno == EAGAIN || errno == EWOULDBLOCK) {
        poll_fd(fd_, POLLOUT, 100);
        continue;
      }
      throw ProtocolError(ProtocolErrc::PeerGone, std::string("send: ") + std::strerror(errno));
    }
    sent += static_cast<std::size_t>(n);
  }
}

ReadResult TcpStream::read_some(std::span<std::uint8_t> out) {
  if (fd_ < 0) return {0, true};
  const ssize_t n = ::recv(fd_, out.data(), out.size(), MSG_DONTWAIT);
  if (n > 0) return {static_cast<std::size_t>(n), false};
  if (n == 0) return {0, true};
  if (errno == EAGAIN || errno == EWOULDBLOCK || errno == EINTR) return {0, false};
  return {0, true};
}

void TcpStream::close() {
  if (fd_ >= 0) {
    ::shutdown(fd_, SHUT_RDWR);
    ::close(fd_);
    fd_ = -1;
  }
}

bool TcpStream::wait_readable(int timeout_ms) const {
  return fd_ >= 0 && poll_fd(fd_, POLLIN, timeout_ms);
}

std::string TcpStream::peer_host() const {
  sockaddr_in addr{};
  socklen_t len = sizeof addr;
  if (::getpeername(fd_, reinterpret_cast<sockaddr*>(&addr), &len) != 0) return {};
  char buf[INET_ADDRSTRLEN] = {};
  ::inet_ntop(AF_INET, &addr.sin_addr, buf, sizeof buf);
  return buf;
}

std::unique_ptr<TcpStream> tcp_connect(const std::string& host, std::uint16_t port, int timeout_ms) {
  const sockaddr_in addr = resolve_ipv4(host, port);
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw sys_error("socket");
  ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) | O_NONBLOCK);
  int rc = ::connect(fd, reinterpret_cast<const sockaddr*>(&addr), sizeof addr);
  if (rc != 0 && errno != EINPROGRESS) {
    const auto err = sys_error("connect " + host);
    ::close(fd);
    throw err;
  }
  if (rc != 0) {
    if (!poll_fd(fd, POLLOUT, timeout_ms)) {
      ::close(fd);
      throw std::runtime_error("connect " + host + ": timed out");
    }
    int so_error = 0;
    socklen_t len = sizeof so_error;
    ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &so_error, &len);
    if (so_error != 0) {
      ::close(fd);
      throw std::runtime_error("connect " + host + ": " + std::strerror(so_error));
    }
  }
  return std::make_unique<TcpStream>(fd);
}

TcpListener::TcpListener(std::uint16_t port, const std::string& bind_host) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw sys_error("socket");
  int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  const sockaddr_in addr = resolve_ipv4(bind_host, port);
  if (::bind(fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) != 0 ||
      ::listen(fd_, 4) != 0) {
    const auto err = sys_error("listen on port " + std::to_string(port));
    ::close(fd_);
    throw err;
  }
  port_ = bound_port(fd_);
}

TcpListener::~TcpListener() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<TcpStream> TcpListener::accept(int timeout_ms) {
  if (!poll_fd(fd_, POLLIN, timeout_ms)) return nullptr;
  const int fd = ::accept(fd_, nullptr, nullptr);
  if (fd < 0) return nullptr;
  ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) | O_NONBLOCK);
  return std::make_unique<TcpStream>(fd);
}

std::unique_ptr<UdpSocket> UdpSocket::bind(std::uint16_t port, const std::string& host) {
  const int fd = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (fd < 0) throw sys_error("socket");
  int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  const sockaddr_in addr = resolve_ipv4(host, port);
  if (::bind(fd, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) != 0) {
    const auto err = sys_error("bind udp port " + std::to_string(port));
    ::close(fd);
    throw err;
  }
  return std::unique_ptr<UdpSocket>(new UdpSocket(fd));
}

std::unique_ptr<UdpSocket> UdpSocket::connect(const std::string& host, std::uint16_t port) {
  const int fd = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (fd < 0) throw sys_error("socket");
  const sockaddr_in addr = resolve_ipv4(host, port);
  if (::connect(fd, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) != 0) {
    const auto err = sys_error("udp connect " + host);
    ::close(fd);
    throw err;
  }
  return std::unique_ptr<UdpSocket>(new UdpSocket(fd));
}

UdpSocket::~UdpSocket() { ::close(fd_); }

void UdpSocket::send(std::span<const std::uint8_t> datagram) {
  // Refused or dropped datagrams are ignored.
  (void)::send(fd_, datagram.data(), datagram.size(), MSG_DONTWAIT | MSG_NOSIGNAL);
}

std::optional<std::vector<std::uint8_t>> UdpSocket::receive() {
  std::vector<std::uint8_t> buf(kHeaderBytes + kMaxPayloadBytes);
  const ssize_t n = ::recv(fd_, buf.data(), buf.size(), MSG_DONTWAIT);
  if (n < 0) return std::nullopt;
  buf.resize(static_cast<std::size_t>(n));
  return buf;
}

bool UdpSocket::wait_readable(int timeout_ms) const { return poll_fd(fd_, POLLIN, timeout_ms); }

std::uint16_t UdpSocket::local_port() const { return bound_port(fd_); }

}  // namespace rover::proto
