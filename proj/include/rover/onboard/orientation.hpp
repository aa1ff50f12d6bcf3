#pragma once

#include <optional>

#include "rover/geodesy.hpp"
#include "rover/protocol/telemetry.hpp"

namespace rover::onboard {

/// Body axes: x forward, y right, z down. A level rover at rest reads
/// accel (0, 0, +1 g). Positive yaw rate turns clockwise seen from above,
/// matching compass headings.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct ImuSample {
  Vec3 accel_g;
  Vec3 gyro_dps;
};

/// Complementary-filter blend time constant. 490 ms gives the common
/// alpha = 0.98 weighting at a 10 ms IMU sample period; the per-update
/// weight is scaled to whatever dt is supplied.
inline constexpr double kDefaultImuTimeConstantMs = 490.0;

/// Gyro weight for one update of length dt: tau / (tau + dt).
double blend_alpha(double dt_ms, double time_constant_ms = kDefaultImuTimeConstantMs);

/// Roll and pitch implied by a static gravity reading, in degrees.
Orientation gravity_attitude(const Vec3& accel_g);

/// One complementary-filter update. Roll and pitch integrate the gyro and
/// are pulled toward the accelerometer's gravity reference; yaw integrates
/// the gyro and, when a compass heading is supplied, is pulled toward it
/// the same way. Throws std::invalid_argument if dt_ms <= 0.
Orientation compute_orientation(const Vec3& accel_g, const Vec3& gyro_dps, const Orientation& prev,
                                double dt_ms, std::optional<geo::HeadingDeg> compass = std::nullopt,
                                double time_constant_ms = kDefaultImuTimeConstantMs);

}  // namespace rover::onboard
