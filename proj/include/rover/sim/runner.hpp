#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rover/onboard/controller.hpp"
#include "rover/protocol/link.hpp"
#include "rover/protocol/session.hpp"
#include "rover/sim/scenario.hpp"

namespace rover::sim {

/// Moment the autonomy state machine handed a waypoint to the vision phase.
struct VisionEntry {
  std::size_t waypoint_index = 0;
  std::int64_t t_ms = 0;
  double fix_distance_m = 0.0;   // what the controller saw
  double true_distance_m = 0.0;  // ground truth
};

struct RunResult {
  std::uint64_t seed = 0;
  std::int64_t end_t_ms = 0;
  AutonomyTag final_tag = AutonomyTag::Idle;
  std::optional<std::string> fault_reason;
  std::vector<VisionEntry> vision_entries;
  std::vector<std::size_t> waypoints_reached;  // in order of arrival
  double max_abs_steer_deg = 0.0;
  bool charge_monotone = true;
  std::optional<std::int64_t> link_dead_at_ms;  // first tick the radio was out of range
  std::optional<std::int64_t> halted_at_ms;     // first standstill after that
  std::uint64_t telemetry_sent = 0;
  std::uint64_t telemetry_received = 0;
  std::string telemetry_log;  // NDJSON, one published snapshot per line

  bool arrived() const { return final_tag == AutonomyTag::Arrived; }
};

/// Runs the onboard controller against the simulated world with a scripted
/// base station on the other end of an in-memory control session and a
/// lossy telemetry channel. Single-threaded and driven by simulated time.
class MissionRunner {
 public:
  MissionRunner(Scenario scenario, std::uint64_t seed,
                onboard::ControllerConfig config = onboard::ControllerConfig{});

  /// When set, one NDJSON line per tick (ground truth, actuator command and
  /// snapshot) is written here.
  void record_to(std::ostream* trace) { trace_ = trace; }

  static constexpr std::int64_t kTelemetryPeriodMs = 200;

  /// Advances one control tick. Returns false once the run is over.
  bool tick();

  RunResult run();

  const SimWorld& world() const { return world_; }
  const onboard::RoverState& state() const { return state_; }
  const RunResult& result() const { return result_; }
  const std::optional<TelemetrySnapshot>& base_view() const { return receiver_->latest(); }

 private:
  void connect(std::int64_t now);
  bool finished() const;

  Scenario scenario_;
  onboard::ControllerConfig config_;
  SimWorld world_;
  onboard::RoverState state_;
  std::vector<ScheduledCommand> commands_;
  std::size_t next_command_ = 0;

  std::shared_ptr<proto::LinkGate> gate_ = std::make_shared<proto::LinkGate>();
  std::unique_ptr<proto::ControlSession> base_;
  std::unique_ptr<proto::ControlSession> rover_;
  std::optional<std::int64_t> reconnect_at_;

  proto::LinkQuality quality_ = proto::LinkQuality::Full;
  std::unique_ptr<proto::DatagramChannel> telemetry_tx_;
  std::unique_ptr<proto::DatagramChannel> telemetry_rx_;
  std::unique_ptr<proto::TelemetryPublisher> publisher_;
  std::unique_ptr<proto::TelemetryReceiver> receiver_;

  std::vector<double> last_charge_;
  RunResult result_;
  std::ostream* trace_ = nullptr;
  bool done_ = false;
};

/// Convenience: run a scenario to completion.
RunResult run_scenario(const Scenario& scenario, std::uint64_t seed, std::ostream* trace = nullptr);

}  // namespace rover::sim
