#include "rover/onboard/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace rover::onboard {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("expected a number, got '" + v + "'");
  return out;
}

std::int64_t to_int(const std::string& v) {
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("expected an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("expected a boolean, got '" + v + "'");
}

std::uint16_t to_port(const std::string& v) {
  const auto p = to_int(v);
  if (p <= 0 || p > 65535) throw ConfigError("port out of range: " + v);
  return static_cast<std::uint16_t>(p);
}

struct SectionSpec {
  std::vector<BatteryPack> packs;
  bool series = false;
  std::vector<double> taps;
  bool touched = false;
};

std::vector<BatteryPack> parse_packs(const std::string& v) {
  std::vector<BatteryPack> packs;
  for (const auto& item : split(v, ',')) {
    const auto x = item.find('x');
    if (x == std::string::npos) throw ConfigError("pack must be <mAh>x<volts>: '" + item + "'");
    packs.push_back({to_double(trim(item.substr(0, x))), to_double(trim(item.substr(x + 1))), 1.0});
  }
  return packs;
}

}  // namespace

ControllerConfig parse_config(const std::string& text) {
  ControllerConfig cfg;
  std::map<std::string, SectionSpec> sections;
  for (const auto& s : cfg.power) {
    auto& entry = sections[to_string(s.id)];
    entry.packs = s.packs;
    entry.series = s.series;
    entry.taps = s.taps_v;
  }

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    try {
      auto& a = cfg.autonomy;
      if (key == "tick_ms") cfg.tick_ms = to_int(value);
      else if (key == "max_steer_deg") cfg.max_steer_deg = to_double(value);
      else if (key == "arm_payload_limit_kg") cfg.arm_payload_limit_kg = to_double(value);
      else if (key == "imu_time_constant_ms") cfg.imu_time_constant_ms = to_double(value);
      else if (key == "align_tolerance_deg") a.align_tolerance_deg = to_double(value);
      else if (key == "realign_error_deg") a.realign_error_deg = to_double(value);
      else if (key == "steer_gain") a.steer_gain = to_double(value);
      else if (key == "cruise_throttle") a.cruise_throttle = to_double(value);
      else if (key == "approach_throttle") a.approach_throttle = to_double(value);
      else if (key == "turn_throttle") a.turn_throttle = to_double(value);
      else if (key == "vision_takeover_radius_m") a.vision_takeover_radius_m = to_double(value);
      else if (key == "arrival_radius_m") a.arrival_radius_m = to_double(value);
      else if (key == "no_fix_limit") a.no_fix_limit = static_cast<int>(to_int(value));
      else if (key == "control_port") cfg.control_port = to_port(value);
      else if (key == "telemetry_port") cfg.telemetry_port = to_port(value);
      else if (key == "heartbeat_interval_ms") cfg.heartbeat_interval_ms = to_int(value);
      else if (key == "watchdog_ms") cfg.watchdog_ms = to_int(value);
      else if (key.rfind("power.", 0) == 0) {
        const auto dot = key.find('.', 6);
        const std::string name = key.substr(6, dot == std::string::npos ? std::string::npos : dot - 6);
        const auto it = sections.find(name);
        if (it == sections.end() || dot == std::string::npos) throw ConfigError("unknown key " + key);
        const std::string field = key.substr(dot + 1);
        if (field == "packs") it->second.packs = parse_packs(value);
        else if (field == "series") it->second.series = to_bool(value);
        else if (field == "taps") {
          it->second.taps.clear();
          if (!value.empty())
            for (const auto& t : split(value, ',')) it->second.taps.push_back(to_double(t));
        } else {
          throw ConfigError("unknown key " + key);
        }
        it->second.touched = true;
      } else {
        throw ConfigError("unknown key " + key);
      }
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }

  if (cfg.tick_ms <= 0) throw ConfigError("tick_ms must be positive");
  if (!(cfg.max_steer_deg > 0.0)) throw ConfigError("max_steer_deg must be positive");
  if (cfg.heartbeat_interval_ms <= 0 || cfg.watchdog_ms <= cfg.heartbeat_interval_ms)
    throw ConfigError("watchdog_ms must exceed a positive heartbeat_interval_ms");
  if (cfg.autonomy.no_fix_limit <= 0) throw ConfigError("no_fix_limit must be positive");

  for (auto& section : cfg.power) {
    const auto& entry = sections[to_string(section.id)];
    if (!entry.touched) continue;
    try {
      section = make_section(section.id, entry.packs, entry.series, entry.taps);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("power.") + to_string(section.id) + ": " + e.what());
    }
  }
  return cfg;
}

ControllerConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::optional<std::filesystem::path> resolve_config_path(
    const std::optional<std::filesystem::path>& explicit_path) {
  if (explicit_path) return explicit_path;
  if (const char* env = std::getenv("ROVER_CONFIG"); env != nullptr && *env != '\0')
    return std::filesystem::path(env);
  if (std::filesystem::exists("rover.conf")) return std::filesystem::path("rover.conf");
  return std::nullopt;
}

}  // namespace rover::onboard
