#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rover/geodesy.hpp"
#include "rover/nmea.hpp"
#include "rover/onboard/autonomy.hpp"
#include "rover/onboard/state.hpp"
#include "rover/protocol/link.hpp"

namespace rover::sim {

enum class TerrainKind { VerticalDrop, Slope, Obstacle };

const char* to_string(TerrainKind kind);

/// A terrain hazard occupying a disk of radius extent_m around location.
struct TerrainFeature {
  TerrainKind kind = TerrainKind::Obstacle;
  geo::GeoPoint location;
  double extent_m = 1.0;
  double angle_deg = 90.0;  // (0, 90]
  double height_m = 0.1;    // > 0

  /// Throws std::invalid_argument when angle, height or extent is out of range.
  void validate() const;
};

/// Height the rover can descend off a vertical drop of the given face angle.
/// Linear between (60 deg, 0.45 m) and (90 deg, 0.7 m), flat outside.
double drop_height_limit(double angle_deg);

inline constexpr double kSlopeAngleLimitDeg = 35.0;
inline constexpr double kSlopeHeightLimitM = 1.2;
inline constexpr double kObstacleHeightLimitM = 0.2794;

bool traversable(const TerrainFeature& feature);

struct NoiseModel {
  double gps_error_radius_m = 3.0;
  double compass_sigma_deg = 2.0;

  void validate() const;
};

struct VehicleParams {
  double wheelbase_m = 0.9;
  double track_width_m = 0.8;
  double max_speed_mps = 1.0;
  double detection_range_m = 3.5;
  double camera_fov_deg = 165.0;

  void validate() const;
};

struct Beacon {
  geo::GeoPoint pos;
  std::size_t waypoint_index = 0;
};

struct RoverPose {
  geo::GeoPoint pos;
  geo::HeadingDeg heading;
  double speed_mps = 0.0;
  double yaw_rate_dps = 0.0;
};

/// The simulated field. Every random draw comes from streams seeded by
/// `seed`, one stream per sensor, so adding draws to one sensor never
/// perturbs another.
struct SimWorld {
  std::uint64_t seed = 0;
  std::int64_t t_ms = 0;
  RoverPose rover;
  geo::GeoPoint base_pos;
  std::vector<TerrainFeature> terrain;
  std::vector<Beacon> beacons;
  NoiseModel noise;
  proto::LinkBudget link;
  VehicleParams vehicle;
  bool blocked = false;  // last step stopped at an impassable feature

  std::mt19937_64 gps_rng;
  std::mt19937_64 compass_rng;
  std::mt19937_64 env_rng;
  std::mt19937_64 link_rng;

  SimWorld(std::uint64_t seed, RoverPose start, geo::GeoPoint base);
};

/// Advances the world by dt_ms under the commanded drive. Speed is
/// max_speed * mean(throttle); yaw rate combines front steer
/// (v * tan(steer) / wheelbase) with skid from the left/right throttle
/// difference. Motion into an impassable feature is refused and the rover
/// stops at its current position. Throws std::invalid_argument if dt_ms <= 0.
void step(SimWorld& world, const onboard::DriveState& drive, std::int64_t dt_ms);

/// True position displaced uniformly on a disk of the configured radius.
nmea::GpsFix sample_gps_fix(SimWorld& world);

/// sample_gps_fix encoded as a GGA sentence. Encoding rounds coordinates to
/// 1e-4 arc minute (about 0.19 m of latitude).
std::string sample_gps(SimWorld& world);

/// True heading plus Gaussian noise, wrapped to [0, 360).
geo::HeadingDeg sample_compass(SimWorld& world);

/// Relative bearing and range of the beacon marking `waypoint_index`, if it
/// is within detection range and inside the camera field of view.
std::optional<onboard::BeaconObservation> observe_beacon(const SimWorld& world,
                                                         std::size_t waypoint_index);

/// Distance from the rover to the base station antenna.
double distance_to_base(const SimWorld& world);

}  // namespace rover::sim
