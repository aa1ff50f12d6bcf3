#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "rover/protocol/message.hpp"
#include "rover/sim/world.hpp"

namespace rover::sim {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A base-station command issued at a fixed simulated time.
struct ScheduledCommand {
  std::int64_t t_ms = 0;
  proto::Message message;
};

/// Everything needed to reproduce a run besides the seed.
///
/// JSON layout (all keys lowerCamelCase, optional ones in brackets):
///
///   { "name": "...",
///     "start": {"lat": .., "lon": .., ["headingDeg": ..]},
///     ["base": {"lat": .., "lon": ..}],                  defaults to start
///     ["waypoints": [{"lat": .., "lon": ..}, ...]],
///     ["beacons": [{"lat": .., "lon": .., "waypointIndex": n}, ...]],
///                                                        defaults to one per waypoint
///     ["terrain": [{"kind": "verticalDrop|slope|obstacle", "lat": .., "lon": ..,
///                   ["extentM": 1], ["angleDeg": 90], "heightM": ..}]],
///     ["noise": {"gpsErrorRadiusM": 3, "compassSigmaDeg": 2}],
///     ["link": {"fullStrengthRangeM": 900, "dropoutRangeM": 1050, "degradedLossRate": 0.25}],
///     ["vehicle": {"wheelbaseM": .., "trackWidthM": .., "maxSpeedMps": ..,
///                  "detectionRangeM": .., "cameraFovDeg": ..}],
///     ["durationS": 600],
///     ["stopWhenDone": true],
///     ["commands": [{"tMs": 0, "message": {"type": "drive", ...}}, ...]] }
///
/// Command messages use the wire layout with "seq" optional; the base
/// station session stamps it when sending.
///
/// Without "commands" the base uploads the waypoints and starts autonomy at
/// t = 0.
struct Scenario {
  std::string name;
  RoverPose start;
  geo::GeoPoint base;
  std::vector<geo::GeoPoint> waypoints;
  std::vector<Beacon> beacons;
  std::vector<TerrainFeature> terrain;
  NoiseModel noise;
  proto::LinkBudget link;
  VehicleParams vehicle;
  double duration_s = 600.0;
  bool stop_when_done = true;
  std::vector<ScheduledCommand> commands;

  /// Throws ScenarioError on inconsistent content.
  void validate() const;
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const Scenario& scenario);

/// The commands actually issued: the explicit list, or the default
/// upload-and-start pair.
std::vector<ScheduledCommand> effective_commands(const Scenario& scenario);

/// A fresh world for this scenario and seed.
SimWorld make_world(const Scenario& scenario, std::uint64_t seed);

/// The reference waypoint course: six gates laid out from `start`, the first
/// three about 10 m apart, the fourth about 20 m further out, the last two
/// about 10 m apart on the way back.
Scenario course_scenario(const geo::GeoPoint& start, double gps_error_radius_m = 3.0,
                         double compass_sigma_deg = 2.0);

}  // namespace rover::sim
