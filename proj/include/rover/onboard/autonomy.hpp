#pragma once

#include <optional>

#include "rover/nmea.hpp"
#include "rover/onboard/config.hpp"
#include "rover/onboard/state.hpp"

namespace rover::onboard {

/// What the camera pipeline reports about the gate marker of the active
/// waypoint: bearing relative to the rover's nose (positive = right) and range.
struct BeaconObservation {
  double bearing_deg = 0.0;
  double range_m = 0.0;
};

/// One control tick of GPS + compass waypoint following.
///
/// Transitions:
///   AlignHeading   -> TraverseGps     once |heading error| < align tolerance
///   AlignHeading   -> VisionApproach  if already inside the takeover radius
///   TraverseGps    -> VisionApproach  when the fix is within the takeover radius
///   TraverseGps    -> AlignHeading    when the heading error exceeds realign_error_deg
///   VisionApproach -> AlignHeading    (next waypoint) when the beacon is within arrival radius
///   VisionApproach -> Arrived         same, on the last waypoint
///   any active     -> Fault           after no_fix_limit consecutive ticks without a fix
///
/// A tick without a fix holds position. Inactive states command zero motion.
/// `max_steer_deg` bounds every steering output.
DriveState run_autonomy_step(AutonomyState& state, const nmea::GpsFix& fix, geo::HeadingDeg heading,
                             const std::optional<BeaconObservation>& beacon,
                             const AutonomyParams& params, double max_steer_deg = 35.0);

}  // namespace rover::onboard
