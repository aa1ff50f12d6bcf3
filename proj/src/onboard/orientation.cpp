#include "rover/onboard/orientation.hpp"

#include <cmath>
#include <stdexcept>

namespace rover::onboard {

namespace {

double wrap_180(double deg) {
  double w = std::remainder(deg, 360.0);
  if (w == -180.0) w = 180.0;
  return w;
}

}  // namespace

double blend_alpha(double dt_ms, double time_constant_ms) {
  return time_constant_ms / (time_constant_ms + dt_ms);
}

Orientation gravity_attitude(const Vec3& a) {
  return {geo::rad_to_deg(std::atan2(a.y, a.z)),
          geo::rad_to_deg(std::atan2(-a.x, std::hypot(a.y, a.z))), 0.0};
}

Orientation compute_orientation(const Vec3& accel_g, const Vec3& gyro_dps, const Orientation& prev,
                                double dt_ms, std::optional<geo::HeadingDeg> compass,
                                double time_constant_ms) {
  if (!(dt_ms > 0.0)) throw std::invalid_argument("dt must be positive");
  const double dt_s = dt_ms / 1000.0;
  const double alpha = blend_alpha(dt_ms, time_constant_ms);

  Orientation out;
  out.roll_deg = wrap_180(prev.roll_deg + gyro_dps.x * dt_s);
  out.pitch_deg = wrap_180(prev.pitch_deg + gyro_dps.y * dt_s);
  out.yaw_deg = geo::wrap_360(prev.yaw_deg + gyro_dps.z * dt_s);

  // No gravity reference in free fall; trust the gyro alone.
  const double norm = std::sqrt(accel_g.x * accel_g.x + accel_g.y * accel_g.y + accel_g.z * accel_g.z);
  if (norm > 1e-6) {
    const Orientation ref = gravity_attitude(accel_g);
    out.roll_deg = wrap_180(out.roll_deg + (1.0 - alpha) * wrap_180(ref.roll_deg - out.roll_deg));
    out.pitch_deg = wrap_180(out.pitch_deg + (1.0 - alpha) * wrap_180(ref.pitch_deg - out.pitch_deg));
  }
  if (compass) {
    const double err = geo::angular_difference(geo::HeadingDeg(out.yaw_deg), *compass);
    out.yaw_deg = geo::wrap_360(out.yaw_deg + (1.0 - alpha) * err);
  }
  return out;
}

}  // namespace rover::onboard
