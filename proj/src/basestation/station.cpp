#include "rover/basestation/station.hpp"

#include <charconv>
#include <chrono>
#include <stdexcept>
#include <thread>

namespace rover::base {

RoverAddress parse_rover_address(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos) {
    if (text.empty()) throw std::invalid_argument("empty rover address");
    return {text, proto::kDefaultControlPort};
  }
  RoverAddress a{text.substr(0, colon), 0};
  const std::string port = text.substr(colon + 1);
  unsigned value = 0;
  const auto [end, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
  if (a.host.empty() || ec != std::errc{} || end != port.data() + port.size() || value == 0 || value > 65535)
    throw std::invalid_argument("rover address must be host:port, got \"" + text + "\"");
  a.port = static_cast<std::uint16_t>(value);
  return a;
}

BaseStation::BaseStation(ConsoleBridge& bridge, StationOptions options)
    : bridge_(bridge), options_(std::move(options)) {
  telemetry_ = proto::UdpSocket::bind(options_.telemetry_port);
  receiver_ = std::make_unique<proto::TelemetryReceiver>(*telemetry_);
}

BaseStation::~BaseStation() = default;

std::uint16_t BaseStation::telemetry_port() const { return telemetry_->local_port(); }

void BaseStation::step(std::int64_t now) {
  if (!bridge_.connected() && now >= next_attempt_ms_) {
    next_attempt_ms_ = now + options_.reconnect_ms;
    try {
      auto stream = proto::tcp_connect(options_.rover.host, options_.rover.port, 500);
      bridge_.attach(std::make_unique<proto::ControlSession>(proto::Role::Client, std::move(stream), now,
                                                             options_.session),
                     now);
    } catch (const std::runtime_error&) {
    }
  }
  bridge_.pump(now);
  if (receiver_->poll()) bridge_.on_telemetry(*receiver_->latest(), now);
}

void BaseStation::run(const std::atomic<bool>& stop, std::int64_t period_ms) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  while (!stop.load()) {
    const auto now = std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - start).count();
    step(now);
    telemetry_->wait_readable(static_cast<int>(period_ms));
  }
}

}  // namespace rover::base
