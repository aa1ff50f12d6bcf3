#include "rover/sim/runner.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "rover/protocol/codec.hpp"
#include "rover/sim/sensors.hpp"

namespace rover::sim {

using nlohmann::json;

namespace {

json trace_line(const SimWorld& w, const onboard::DriveState& cmd, proto::LinkQuality q,
                const TelemetrySnapshot& snap) {
  return {{"tMs", snap.t_ms},
          {"truth",
           {{"lat", w.rover.pos.lat()},
            {"lon", w.rover.pos.lon()},
            {"headingDeg", w.rover.heading.value()},
            {"speedMps", w.rover.speed_mps},
            {"blocked", w.blocked}}},
          {"command", {{"wheelThrottle", cmd.wheel_throttle}, {"steerDeg", cmd.steer_deg}}},
          {"link", proto::to_string(q)},
          {"snapshot", proto::snapshot_to_json(snap)}};
}

}  // namespace

MissionRunner::MissionRunner(Scenario scenario, std::uint64_t seed, onboard::ControllerConfig config)
    : scenario_(std::move(scenario)),
      config_(std::move(config)),
      world_(make_world(scenario_, seed)),
      commands_(effective_commands(scenario_)) {
  scenario_.validate();
  state_.power = config_.power;
  std::stable_sort(commands_.begin(), commands_.end(),
                   [](const ScheduledCommand& a, const ScheduledCommand& b) { return a.t_ms < b.t_ms; });

  auto [tx, rx] = proto::make_datagram_pair([this] {
    switch (quality_) {
      case proto::LinkQuality::Full: return false;
      case proto::LinkQuality::Dead: return true;
      case proto::LinkQuality::Degraded: break;
    }
    return std::bernoulli_distribution(world_.link.degraded_loss_rate)(world_.link_rng);
  });
  telemetry_tx_ = std::move(tx);
  telemetry_rx_ = std::move(rx);
  publisher_ = std::make_unique<proto::TelemetryPublisher>(*telemetry_tx_);
  receiver_ = std::make_unique<proto::TelemetryReceiver>(*telemetry_rx_);

  for (const auto& s : state_.power) last_charge_.push_back(onboard::charge_fraction(s));
  result_.seed = seed;
  connect(0);
}

void MissionRunner::connect(std::int64_t now) {
  auto [a, b] = proto::make_loopback_pair(gate_);
  const proto::SessionConfig sc{config_.heartbeat_interval_ms, config_.watchdog_ms};
  base_ = std::make_unique<proto::ControlSession>(proto::Role::Client, std::move(a), now, sc);
  rover_ = std::make_unique<proto::ControlSession>(proto::Role::Server, std::move(b), now, sc);
  onboard::on_link_restored(state_);
  reconnect_at_.reset();
}

bool MissionRunner::finished() const {
  if (static_cast<double>(world_.t_ms) >= scenario_.duration_s * 1000.0) return true;
  if (!scenario_.stop_when_done || next_command_ < commands_.size()) return false;
  const auto tag = state_.autonomy.tag;
  return tag == AutonomyTag::Arrived || tag == AutonomyTag::Fault;
}

bool MissionRunner::tick() {
  if (done_) return false;
  const std::int64_t now = world_.t_ms;

  // Radio range.
  quality_ = proto::link_quality(distance_to_base(world_), world_.link);
  gate_->up = quality_ != proto::LinkQuality::Dead;
  if (quality_ == proto::LinkQuality::Dead && !result_.link_dead_at_ms) result_.link_dead_at_ms = now;

  // Base station: reconnect after a dropped session, then issue due commands.
  if (!base_->alive()) {
    if (!reconnect_at_) reconnect_at_ = now + 1000;
    if (gate_->up && now >= *reconnect_at_) connect(now);
  }
  while (base_->alive() && next_command_ < commands_.size() && commands_[next_command_].t_ms <= now)
    base_->send(commands_[next_command_++].message);
  base_->poll(now);
  while (base_->receive()) {
  }

  // Rover: apply inbound commands; fail safe if the session died.
  rover_->poll(now);
  while (auto msg = rover_->receive())
    for (auto& reply : onboard::handle_message(*msg, state_, config_)) rover_->send(std::move(reply));
  if (!rover_->alive() && state_.link_up) onboard::failsafe_on_link_loss(state_);

  // Sensors.
  const auto in = sense(world_, state_.autonomy.current_index);

  const auto before = state_.autonomy;
  const auto cmd = onboard::control_tick(state_, in, config_);
  const auto& after = state_.autonomy;

  if (after.tag == AutonomyTag::VisionApproach && before.tag != AutonomyTag::VisionApproach) {
    const auto& wp = after.waypoints.at(after.current_index);
    VisionEntry e{after.current_index, now, 0.0, geo::haversine_distance(world_.rover.pos, wp)};
    if (in.fix && in.fix->point) e.fix_distance_m = geo::haversine_distance(*in.fix->point, wp);
    result_.vision_entries.push_back(e);
  }
  if (before.active() && (after.current_index != before.current_index || after.tag == AutonomyTag::Arrived))
    result_.waypoints_reached.push_back(before.current_index);

  result_.max_abs_steer_deg = std::max(result_.max_abs_steer_deg, std::abs(cmd.steer_deg));
  for (std::size_t i = 0; i < state_.power.size(); ++i) {
    const double c = onboard::charge_fraction(state_.power[i]);
    if (c > last_charge_[i]) result_.charge_monotone = false;
    last_charge_[i] = c;
  }

  step(world_, cmd, config_.tick_ms);
  if (result_.link_dead_at_ms && !result_.halted_at_ms && cmd.all_zero() && world_.rover.speed_mps == 0.0)
    result_.halted_at_ms = world_.t_ms;

  // Telemetry.
  const auto sensors = read_environment(world_, in.fix);
  const bool periodic = now % kTelemetryPeriodMs == 0;
  if (periodic || state_.snapshot_requested || trace_) {
    const auto snap = onboard::build_snapshot(state_, sensors, now);
    if (periodic || state_.snapshot_requested) {
      publisher_->publish(snap);
      ++result_.telemetry_sent;
      result_.telemetry_log += proto::snapshot_to_json(snap).dump();
      result_.telemetry_log += '\n';
      state_.snapshot_requested = false;
    }
    if (trace_) *trace_ << trace_line(world_, cmd, quality_, snap).dump() << '\n';
  }
  if (receiver_->poll()) ++result_.telemetry_received;

  result_.end_t_ms = world_.t_ms;
  result_.final_tag = state_.autonomy.tag;
  result_.fault_reason = state_.autonomy.fault_reason;
  done_ = finished();
  return !done_;
}

RunResult MissionRunner::run() {
  while (tick()) {
  }
  return result_;
}

RunResult run_scenario(const Scenario& scenario, std::uint64_t seed, std::ostream* trace) {
  MissionRunner runner(scenario, seed);
  runner.record_to(trace);
  return runner.run();
}

}  // namespace rover::sim
