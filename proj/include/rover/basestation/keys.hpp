#pragma once

#include <set>
#include <string>

#include "rover/protocol/message.hpp"

namespace rover::base {

inline constexpr double kFullSteerRequestDeg = 35.0;

/// Keyboard driving: W/S throttle +/-1, A/D steer -/+35 deg, opposite keys
/// cancel, no keys gives the zero (deadman) command. Tokens are
/// case-insensitive; unknown tokens are ignored.
proto::Drive drive_command_from_keys(const std::set<std::string>& pressed);

/// Splits a string such as "wd" or "W,D" into key tokens.
std::set<std::string> keys_from_string(const std::string& text);

}  // namespace rover::base
