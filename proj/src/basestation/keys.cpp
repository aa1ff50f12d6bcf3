#include "rover/basestation/keys.hpp"

#include <cctype>

namespace rover::base {

proto::Drive drive_command_from_keys(const std::set<std::string>& pressed) {
  bool w = false, a = false, s = false, d = false;
  for (const auto& key : pressed) {
    if (key.size() != 1) continue;
    switch (std::toupper(static_cast<unsigned char>(key[0]))) {
      case 'W': w = true; break;
      case 'A': a = true; break;
      case 'S': s = true; break;
      case 'D': d = true; break;
      default: break;
    }
  }
  proto::Drive drive;
  drive.throttle = (w ? 1.0 : 0.0) - (s ? 1.0 : 0.0);
  drive.steer_deg = (d ? kFullSteerRequestDeg : 0.0) - (a ? kFullSteerRequestDeg : 0.0);
  return drive;
}

std::set<std::string> keys_from_string(const std::string& text) {
  std::set<std::string> keys;
  for (char c : text)
    if (std::isalpha(static_cast<unsigned char>(c)))
      keys.insert(std::string(1, static_cast<char>(std::toupper(static_cast<unsigned char>(c)))));
  return keys;
}

}  // namespace rover::base
