#include "rover/onboard/autonomy.hpp"

#include <algorithm>
#include <cmath>

namespace rover::onboard {

namespace {

double clamp_steer(double deg, double limit) { return std::clamp(deg, -limit, limit); }

DriveState rotate_in_place(double error_deg, const AutonomyParams& p, double max_steer) {
  const double dir = error_deg >= 0.0 ? 1.0 : -1.0;
  return DriveState::differential(dir * p.turn_throttle, -dir * p.turn_throttle, dir * max_steer);
}

DriveState steer_toward(double error_deg, double throttle, const AutonomyParams& p,
                        double max_steer) {
  return DriveState::uniform(throttle, clamp_steer(p.steer_gain * error_deg, max_steer));
}

}  // namespace

DriveState run_autonomy_step(AutonomyState& state, const nmea::GpsFix& fix, geo::HeadingDeg heading,
                             const std::optional<BeaconObservation>& beacon,
                             const AutonomyParams& params, double max_steer_deg) {
  if (!state.active()) return {};

  if (!fix.has_position()) {
    if (++state.no_fix_ticks >= params.no_fix_limit) {
      state.tag = AutonomyTag::Fault;
      state.fault_reason = "gps fix lost";
    }
    return {};
  }
  state.no_fix_ticks = 0;

  const geo::GeoPoint& here = *fix.point;
  const geo::GeoPoint& target = state.waypoints.at(state.current_index);
  const double distance = geo::haversine_distance(here, target);
  std::optional<double> error;
  if (distance > 0.0) {
    try {
      error = geo::angular_difference(heading, geo::initial_bearing(here, target));
    } catch (const geo::DegenerateBearing&) {
    }
  }

  // Each state either commands motion or hands over to the next state within
  // the same tick; the graph has no cycle reachable without a motion command.
  // A waypoint only advances from a tick that began in VisionApproach, so
  // the phase is always visible in telemetry before the index moves.
  const bool began_in_vision = state.tag == AutonomyTag::VisionApproach;
  for (int hop = 0; hop < 4; ++hop) {
    switch (state.tag) {
      case AutonomyTag::AlignHeading:
        if (distance <= params.vision_takeover_radius_m || !error) {
          state.tag = AutonomyTag::VisionApproach;
          continue;
        }
        if (std::abs(*error) < params.align_tolerance_deg) {
          state.tag = AutonomyTag::TraverseGps;
          continue;
        }
        return rotate_in_place(*error, params, max_steer_deg);

      case AutonomyTag::TraverseGps:
        if (distance <= params.vision_takeover_radius_m || !error) {
          state.tag = AutonomyTag::VisionApproach;
          continue;
        }
        if (std::abs(*error) > params.realign_error_deg) {
          state.tag = AutonomyTag::AlignHeading;
          return rotate_in_place(*error, params, max_steer_deg);
        }
        return steer_toward(*error, params.cruise_throttle, params, max_steer_deg);

      case AutonomyTag::VisionApproach:
        if (beacon) {
          if (beacon->range_m <= params.arrival_radius_m) {
            if (!began_in_vision) return {};
            if (state.current_index + 1 >= state.waypoints.size()) {
              state.tag = AutonomyTag::Arrived;
            } else {
              ++state.current_index;
              state.tag = AutonomyTag::AlignHeading;
            }
            return {};
          }
          return steer_toward(beacon->bearing_deg, params.approach_throttle, params, max_steer_deg);
        }
        // Gate not in view yet: creep along the GPS bearing, turning in place
        // if the gate is well off the nose.
        if (!error) return DriveState::uniform(params.approach_throttle, 0.0);
        if (std::abs(*error) > params.realign_error_deg)
          return rotate_in_place(*error, params, max_steer_deg);
        return steer_toward(*error, params.approach_throttle, params, max_steer_deg);

      case AutonomyTag::Idle:
      case AutonomyTag::Arrived:
      case AutonomyTag::Fault:
        return {};
    }
  }
  return {};
}

}  // namespace rover::onboard
