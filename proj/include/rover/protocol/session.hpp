#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>

#include "rover/protocol/codec.hpp"
#include "rover/protocol/transport.hpp"

namespace rover::proto {

inline constexpr std::uint16_t kDefaultControlPort = 7401;
inline constexpr std::uint16_t kDefaultTelemetryPort = 7402;

struct SessionConfig {
  std::int64_t heartbeat_interval_ms = 500;
  std::int64_t watchdog_ms = 2000;
};

enum class Role { Client, Server };

enum class SessionStatus { Alive, PeerGone, HeartbeatTimeout, CorruptStream };

const char* to_string(SessionStatus status);

/// One control-channel connection between base station (client) and rover
/// (server).
///
/// Time is injected: the owner calls poll(now_ms) from a single context,
/// which drains the stream, emits heartbeats and runs the watchdog. send()
/// may be called from any context; it stamps control messages with the next
/// sequence number. Control messages that arrive with a sequence number not
/// above the last one accepted are dropped and answered with
/// Ack{accepted: false}.
class ControlSession {
 public:
  ControlSession(Role role, std::unique_ptr<ByteStream> stream, std::int64_t now_ms,
                 SessionConfig config = {});
  ~ControlSession();

  ControlSession(const ControlSession&) = delete;
  ControlSession& operator=(const ControlSession&) = delete;

  /// Sends `msg`, returning the sequence number stamped on it (0 for
  /// unsequenced kinds). Returns nullopt if the session is dead.
  std::optional<std::uint64_t> send(Message msg);

  /// Sends a control message with the caller's own sequence number,
  /// bypassing stamping. Test hook for replay and reordering scenarios.
  bool send_raw(const Message& msg);

  void poll(std::int64_t now_ms);

  /// Next received application message (heartbeats are consumed internally).
  std::optional<Message> receive();

  SessionStatus status() const;
  bool alive() const { return status() == SessionStatus::Alive; }
  Role role() const { return role_; }
  std::int64_t last_rx_ms() const;

  /// Marks the session dead and closes the stream.
  void close();

  std::uint64_t stale_dropped() const;

 private:
  bool write_frame(const Message& msg);
  void fail(SessionStatus reason);

  const Role role_;
  const SessionConfig config_;
  std::unique_ptr<ByteStream> stream_;

  mutable std::mutex mu_;
  SessionStatus status_ = SessionStatus::Alive;
  std::uint64_t next_seq_ = 1;
  std::uint64_t heartbeat_seq_ = 0;
  std::uint64_t last_peer_seq_ = 0;
  std::uint64_t stale_dropped_ = 0;
  std::int64_t last_rx_ms_;
  std::optional<std::int64_t> last_heartbeat_tx_ms_;
  FrameDecoder decoder_;
  std::deque<Message> inbox_;
};

}  // namespace rover::proto
