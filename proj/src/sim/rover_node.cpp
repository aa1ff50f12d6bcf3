#include "rover/sim/rover_node.hpp"

#include <chrono>
#include <stdexcept>
#include <thread>

#include "rover/sim/sensors.hpp"

namespace rover::sim {

RoverNode::RoverNode(Scenario plant, std::uint64_t seed, onboard::ControllerConfig config,
                     const std::string& bind_host)
    : config_(std::move(config)), world_(make_world(plant, seed)) {
  plant.validate();
  if (config_.tick_ms <= 0) throw std::invalid_argument("tick_ms must be positive");
  state_.power = config_.power;
  state_.link_up = false;
  listener_ = std::make_unique<proto::TcpListener>(config_.control_port, bind_host);
}

RoverNode::~RoverNode() = default;

std::uint16_t RoverNode::control_port() const { return listener_->port(); }

bool RoverNode::connected() const { return session_ && session_->alive(); }

std::int64_t RoverNode::now_ms() const { return world_.t_ms; }

void RoverNode::note(const std::string& line) {
  if (log_) *log_ << "[" << world_.t_ms << " ms] " << line << std::endl;
}

void RoverNode::accept_peer() {
  auto stream = listener_->accept(0);
  if (!stream) return;
  const std::string host = stream->peer_host();
  const proto::SessionConfig sc{config_.heartbeat_interval_ms, config_.watchdog_ms};
  session_ = std::make_unique<proto::ControlSession>(proto::Role::Server, std::move(stream), world_.t_ms, sc);
  publisher_.reset();
  try {
    telemetry_ = proto::UdpSocket::connect(host, config_.telemetry_port);
    publisher_ = std::make_unique<proto::TelemetryPublisher>(*telemetry_);
  } catch (const std::exception& e) {
    telemetry_.reset();
    note(std::string("telemetry unavailable: ") + e.what());
  }
  onboard::on_link_restored(state_);
  note("connected to " + host);
}

void RoverNode::tick() {
  const std::int64_t now = world_.t_ms;
  if (!connected()) accept_peer();

  if (session_) {
    session_->poll(now);
    while (auto msg = session_->receive())
      for (auto& reply : onboard::handle_message(*msg, state_, config_)) session_->send(std::move(reply));
    if (!session_->alive() && state_.link_up) {
      onboard::failsafe_on_link_loss(state_);
      note(std::string("session ended: ") + proto::to_string(session_->status()));
    }
  }

  const auto in = sense(world_, state_.autonomy.current_index);
  const auto cmd = onboard::control_tick(state_, in, config_);
  step(world_, cmd, config_.tick_ms);

  const auto sensors = read_environment(world_, in.fix);
  if ((now % kTelemetryPeriodMs == 0 || state_.snapshot_requested) && publisher_ && connected()) {
    publisher_->publish(onboard::build_snapshot(state_, sensors, now));
    state_.snapshot_requested = false;
  }
}

void RoverNode::run(const std::atomic<bool>& stop) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const std::int64_t t0 = world_.t_ms;
  while (!stop.load()) {
    tick();
    std::this_thread::sleep_until(start + std::chrono::milliseconds(world_.t_ms - t0));
  }
}

}  // namespace rover::sim
