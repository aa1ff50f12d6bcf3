#include "rover/basestation/bridge.hpp"

#include <type_traits>

#include "rover/basestation/keys.hpp"
#include "rover/protocol/codec.hpp"

namespace rover::base {

using nlohmann::json;

namespace {

constexpr std::size_t kLogTail = 20;
constexpr std::size_t kSentKindsKept = 256;

bool is_motion(const proto::Message& m) {
  return std::visit(
      [](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, proto::Drive>) return x.throttle != 0.0 || x.steer_deg != 0.0;
        if constexpr (std::is_same_v<T, proto::ArmJoint>) return x.rate != 0.0;
        if constexpr (std::is_same_v<T, proto::StartAutonomy>) return true;
        if constexpr (std::is_same_v<T, proto::ScienceCommand>) return x.action == proto::ScienceAction::Drill;
        return false;
      },
      m);
}

}  // namespace

std::uint64_t EventFeed::publish(json event) {
  std::uint64_t id;
  {
    std::lock_guard lock(mu_);
    id = next_id_++;
    events_.emplace_back(id, std::move(event));
    while (events_.size() > capacity_) events_.pop_front();
  }
  cv_.notify_all();
  return id;
}

std::vector<std::pair<std::uint64_t, json>> EventFeed::wait_after(std::uint64_t after,
                                                                 std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, timeout, [&] { return next_id_ - 1 > after; });
  std::vector<std::pair<std::uint64_t, json>> out;
  for (const auto& e : events_)
    if (e.first > after) out.push_back(e);
  return out;
}

std::uint64_t EventFeed::last_id() const {
  std::lock_guard lock(mu_);
  return next_id_ - 1;
}

const char* to_string(SubmitResult r) {
  switch (r) {
    case SubmitResult::Queued: return "queued";
    case SubmitResult::RejectedWhileEstopped: return "rejectedWhileEstopped";
    case SubmitResult::NotConnected: return "notConnected";
  }
  return "?";
}

ConsoleBridge::ConsoleBridge(std::ostream* log_sink) {
  if (log_sink) writer_ = std::make_unique<AsyncLogWriter>(*log_sink);
}

ConsoleBridge::~ConsoleBridge() = default;

void ConsoleBridge::record(std::int64_t now, RecordKind kind, json data) {
  LogRecord r{log_.next_stamp(now), kind, std::move(data)};
  if (writer_) writer_->push(r.to_line());
  if (kind != RecordKind::Telemetry) feed_.publish({{"type", "log"}, {"record", json::parse(r.to_line())}});
  log_.append(std::move(r));
}

void ConsoleBridge::set_status_locked(bool connected, std::int64_t now, const std::string& reason) {
  if (connected == connected_) return;
  connected_ = connected;
  const char* status = connected ? "connected" : "disconnected";
  record(now, RecordKind::Session, {{"status", status}, {"reason", reason}});
  feed_.publish({{"type", "status"}, {"status", status}, {"reason", reason}});
}

void ConsoleBridge::attach(std::unique_ptr<proto::ControlSession> session, std::int64_t now) {
  std::lock_guard lock(mu_);
  session_ = std::move(session);
  outbound_.clear();
  last_key_tx_.reset();
  sent_kinds_.clear();
  last_now_ = std::max(last_now_, now);
  set_status_locked(session_ && session_->alive(), now, "attached");
}

bool ConsoleBridge::connected() const {
  std::lock_guard lock(mu_);
  return connected_;
}

std::string ConsoleBridge::status() const { return connected() ? "connected" : "disconnected"; }

SubmitResult ConsoleBridge::submit_locked(proto::Message msg) {
  if (!connected_) return SubmitResult::NotConnected;
  if (estopped_ && is_motion(msg)) return SubmitResult::RejectedWhileEstopped;
  if (std::holds_alternative<proto::EStop>(msg)) {
    // E-stop jumps the queue and discards pending motion.
    estopped_ = true;
    keys_.clear();
    key_release_pending_ = false;
    outbound_.clear();
    outbound_.push_front(std::move(msg));
    return SubmitResult::Queued;
  }
  outbound_.push_back(std::move(msg));
  return SubmitResult::Queued;
}

SubmitResult ConsoleBridge::submit(proto::Message msg) {
  std::lock_guard lock(mu_);
  return submit_locked(std::move(msg));
}

SubmitResult ConsoleBridge::set_keys(std::set<std::string> pressed) {
  std::lock_guard lock(mu_);
  if (!connected_) return SubmitResult::NotConnected;
  const auto cmd = drive_command_from_keys(pressed);
  const bool moving = cmd.throttle != 0.0 || cmd.steer_deg != 0.0;
  if (moving && estopped_) return SubmitResult::RejectedWhileEstopped;
  if (!moving && !keys_.empty()) key_release_pending_ = true;
  keys_ = moving ? std::move(pressed) : std::set<std::string>{};
  if (moving) last_key_tx_.reset();  // send the new command on the next pump
  return SubmitResult::Queued;
}

void ConsoleBridge::console_command(const json& command) {
  if (!command.is_object() || !command.contains("type") || !command["type"].is_string())
    throw std::invalid_argument("console command needs a string \"type\"");
  SubmitResult result;
  if (command["type"] == "keys") {
    std::set<std::string> keys;
    for (const auto& k : command.value("pressed", json::array())) {
      if (!k.is_string()) throw std::invalid_argument("keys must be strings");
      keys.insert(k.get<std::string>());
    }
    result = set_keys(std::move(keys));
  } else {
    json wire = command;
    if (!wire.contains("seq")) wire["seq"] = 0;
    proto::Message msg;
    try {
      msg = proto::message_from_json(wire);
    } catch (const proto::ProtocolError& e) {
      throw std::invalid_argument(e.what());
    }
    if (!proto::is_control(msg)) throw std::invalid_argument("not a control command");
    proto::set_sequence(msg, 0);
    result = submit(std::move(msg));
  }
  if (result != SubmitResult::Queued) throw ConsoleRejected(to_string(result));
}

void ConsoleBridge::on_telemetry(const TelemetrySnapshot& snap, std::int64_t now) {
  std::lock_guard lock(mu_);
  if (latest_ && snap.t_ms <= latest_->t_ms) return;
  latest_ = snap;
  estopped_ = snap.estopped;
  const json js = proto::snapshot_to_json(snap);
  feed_.publish({{"type", "telemetry"}, {"snapshot", js}});
  record(now, RecordKind::Telemetry, {{"snapshot", js}});
}

void ConsoleBridge::pump(std::int64_t now) {
  std::lock_guard lock(mu_);
  last_now_ = std::max(last_now_, now);
  if (!session_) return;

  if (connected_) {
    if (!keys_.empty() && (!last_key_tx_ || now - *last_key_tx_ >= kKeyRepeatMs)) {
      outbound_.push_back(drive_command_from_keys(keys_));
      last_key_tx_ = now;
    } else if (keys_.empty() && key_release_pending_) {
      outbound_.push_back(proto::Drive{});
      key_release_pending_ = false;
    }
  }

  while (!outbound_.empty() && session_->alive()) {
    proto::Message msg = std::move(outbound_.front());
    outbound_.pop_front();
    const auto seq = session_->send(msg);
    if (!seq) break;
    proto::set_sequence(msg, *seq);
    sent_kinds_[*seq] = proto::type_name(msg);
    if (sent_kinds_.size() > kSentKindsKept) sent_kinds_.erase(sent_kinds_.begin());
    record(now, RecordKind::Command, proto::to_json(msg));
  }

  session_->poll(now);
  while (auto msg = session_->receive()) {
    if (const auto* ack = std::get_if<proto::Ack>(&*msg)) {
      const auto it = sent_kinds_.find(ack->seq);
      const std::string kind = it == sent_kinds_.end() ? "" : it->second;
      if (kind == "clearEStop" && ack->accepted) estopped_ = false;
      record(now, RecordKind::Ack, proto::to_json(*msg));
      feed_.publish({{"type", "ack"}, {"seq", ack->seq}, {"accepted", ack->accepted}, {"command", kind}});
    }
  }
  if (!session_->alive()) {
    outbound_.clear();
    keys_.clear();
    set_status_locked(false, now, proto::to_string(session_->status()));
  }
}

json ConsoleBridge::state_json() const {
  std::lock_guard lock(mu_);
  json j{{"type", "state"}, {"status", connected_ ? "connected" : "disconnected"}, {"estopped", estopped_}};
  j["snapshot"] = latest_ ? proto::snapshot_to_json(*latest_) : json(nullptr);
  j["logTail"] = json::array();
  const auto& recs = log_.records();
  const std::size_t from = recs.size() > kLogTail ? recs.size() - kLogTail : 0;
  for (std::size_t i = from; i < recs.size(); ++i) j["logTail"].push_back(json::parse(recs[i].to_line()));
  return j;
}

std::optional<TelemetrySnapshot> ConsoleBridge::latest() const {
  std::lock_guard lock(mu_);
  return latest_;
}

bool ConsoleBridge::estopped() const {
  std::lock_guard lock(mu_);
  return estopped_;
}

MissionLog ConsoleBridge::log_copy() const {
  std::lock_guard lock(mu_);
  return log_;
}

void ConsoleBridge::flush_log() {
  if (writer_) writer_->flush();
}

}  // namespace rover::base
