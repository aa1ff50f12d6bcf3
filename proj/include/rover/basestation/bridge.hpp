#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rover/basestation/mission_log.hpp"
#include "rover/protocol/session.hpp"

namespace rover::base {

/// Ordered stream of console events with increasing ids. Readers ask for
/// everything after the last id they saw; old events fall off the back.
class EventFeed {
 public:
  explicit EventFeed(std::size_t capacity = 512) : capacity_(capacity) {}

  std::uint64_t publish(nlohmann::json event);

  /// Events with id > after_id, waiting up to `timeout` for at least one.
  std::vector<std::pair<std::uint64_t, nlohmann::json>> wait_after(std::uint64_t after_id,
                                                                  std::chrono::milliseconds timeout);
  std::uint64_t last_id() const;

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::pair<std::uint64_t, nlohmann::json>> events_;
  std::uint64_t next_id_ = 1;
  std::size_t capacity_;
};

/// A console command refused by the base station before reaching the link.
class ConsoleRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SubmitResult { Queued, RejectedWhileEstopped, NotConnected };

const char* to_string(SubmitResult r);

/// Base-station hub between the control session, the telemetry stream, the
/// mission log and the web console. Keyboard and console commands share one
/// outbound queue; sequence numbers are assigned only by the session during
/// pump(). Every public method is thread-safe.
class ConsoleBridge {
 public:
  static constexpr std::int64_t kKeyRepeatMs = 100;

  /// `log_sink`, when given, receives the mission log as NDJSON through a
  /// background writer.
  explicit ConsoleBridge(std::ostream* log_sink = nullptr);
  ~ConsoleBridge();

  void attach(std::unique_ptr<proto::ControlSession> session, std::int64_t now_ms);
  bool connected() const;
  /// "connected" or "disconnected".
  std::string status() const;

  /// Queues an operator command. Motion commands are refused while the
  /// rover is known to be e-stopped.
  SubmitResult submit(proto::Message msg);

  /// Keyboard state for 10 Hz drive repeats; releasing every key sends one
  /// zero command.
  SubmitResult set_keys(std::set<std::string> pressed);

  /// Parses and submits a console JSON command: any control message in wire
  /// form (seq optional), or {"type": "keys", "pressed": ["W", ...]}.
  /// Throws ConsoleRejected when refused and std::invalid_argument when
  /// malformed.
  void console_command(const nlohmann::json& command);

  /// Latest-wins telemetry intake; older snapshots are dropped.
  void on_telemetry(const TelemetrySnapshot& snapshot, std::int64_t now_ms);

  /// Control-context work: key repeats, draining the outbound queue, session
  /// polling, ack handling and link-status tracking.
  void pump(std::int64_t now_ms);

  /// {"type":"state","status":..,"estopped":..,"snapshot":..,"logTail":[..]}
  nlohmann::json state_json() const;

  std::optional<TelemetrySnapshot> latest() const;
  bool estopped() const;
  EventFeed& feed() { return feed_; }
  MissionLog log_copy() const;
  /// Waits for the background log writer.
  void flush_log();

 private:
  void record(std::int64_t now_ms, RecordKind kind, nlohmann::json data);
  SubmitResult submit_locked(proto::Message msg);
  void set_status_locked(bool connected, std::int64_t now_ms, const std::string& reason);

  mutable std::mutex mu_;
  std::unique_ptr<proto::ControlSession> session_;
  bool connected_ = false;
  std::deque<proto::Message> outbound_;
  std::set<std::string> keys_;
  std::optional<std::int64_t> last_key_tx_;
  bool key_release_pending_ = false;
  bool estopped_ = false;
  std::map<std::uint64_t, std::string> sent_kinds_;
  std::optional<TelemetrySnapshot> latest_;
  std::int64_t last_now_ = 0;

  MissionLog log_;
  std::unique_ptr<AsyncLogWriter> writer_;
  EventFeed feed_;
};

}  // namespace rover::base
