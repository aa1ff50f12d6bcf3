#include "rover/protocol/session.hpp"

#include <array>

namespace rover::proto {

const char* to_string(SessionStatus status) {
  switch (status) {
    case SessionStatus::Alive: return "alive";
    case SessionStatus::PeerGone: return "peerGone";
    case SessionStatus::HeartbeatTimeout: return "heartbeatTimeout";
    case SessionStatus::CorruptStream: return "corruptStream";
  }
  return "?";
}

ControlSession::ControlSession(Role role, std::unique_ptr<ByteStream> stream, std::int64_t now_ms,
                               SessionConfig config)
    : role_(role), config_(config), stream_(std::move(stream)), last_rx_ms_(now_ms) {}

ControlSession::~ControlSession() {
  if (stream_) stream_->close();
}

std::optional<std::uint64_t> ControlSession::send(Message msg) {
  std::lock_guard lock(mu_);
  if (status_ != SessionStatus::Alive) return std::nullopt;
  std::uint64_t seq = 0;
  if (is_control(msg)) {
    seq = next_seq_++;
    set_sequence(msg, seq);
  }
  if (!write_frame(msg)) return std::nullopt;
  return seq;
}

bool ControlSession::send_raw(const Message& msg) {
  std::lock_guard lock(mu_);
  if (status_ != SessionStatus::Alive) return false;
  return write_frame(msg);
}

bool ControlSession::write_frame(const Message& msg) {
  try {
    stream_->write(encode(msg));
    return true;
  } catch (const ProtocolError& e) {
    if (e.code() != ProtocolErrc::PeerGone) throw;
    fail(SessionStatus::PeerGone);
    return false;
  }
}

void ControlSession::fail(SessionStatus reason) {
  if (status_ != SessionStatus::Alive) return;
  status_ = reason;
  stream_->close();
}

void ControlSession::poll(std::int64_t now_ms) {
  std::lock_guard lock(mu_);
  if (status_ != SessionStatus::Alive) return;

  std::array<std::uint8_t, 4096> buf;
  bool peer_closed = false;
  while (true) {
    const ReadResult r = stream_->read_some(buf);
    if (r.bytes > 0) decoder_.feed(std::span(buf).first(r.bytes));
    if (r.peer_closed) peer_closed = true;
    if (r.bytes == 0 || r.peer_closed) break;
  }

  try {
    while (auto msg = decoder_.next()) {
      last_rx_ms_ = now_ms;
      if (std::holds_alternative<Heartbeat>(*msg)) continue;
      if (is_control(*msg)) {
        const std::uint64_t seq = sequence_of(*msg);
        if (seq <= last_peer_seq_) {
          ++stale_dropped_;
          if (!write_frame(Ack{seq, false})) return;
          continue;
        }
        last_peer_seq_ = seq;
      }
      inbox_.push_back(std::move(*msg));
    }
  } catch (const ProtocolError&) {
    fail(SessionStatus::CorruptStream);
    return;
  }

  if (peer_closed) {
    fail(SessionStatus::PeerGone);
    return;
  }

  if (!last_heartbeat_tx_ms_ || now_ms - *last_heartbeat_tx_ms_ >= config_.heartbeat_interval_ms) {
    if (!write_frame(Heartbeat{++heartbeat_seq_})) return;
    last_heartbeat_tx_ms_ = now_ms;
  }

  if (now_ms - last_rx_ms_ >= config_.watchdog_ms) fail(SessionStatus::HeartbeatTimeout);
}

std::optional<Message> ControlSession::receive() {
  std::lock_guard lock(mu_);
  if (inbox_.empty()) return std::nullopt;
  Message m = std::move(inbox_.front());
  inbox_.pop_front();
  return m;
}

SessionStatus ControlSession::status() const {
  std::lock_guard lock(mu_);
  return status_;
}

std::int64_t ControlSession::last_rx_ms() const {
  std::lock_guard lock(mu_);
  return last_rx_ms_;
}

void ControlSession::close() {
  std::lock_guard lock(mu_);
  fail(SessionStatus::PeerGone);
}

std::uint64_t ControlSession::stale_dropped() const {
  std::lock_guard lock(mu_);
  return stale_dropped_;
}

}  // namespace rover::proto
