#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "rover/basestation/bridge.hpp"
#include "rover/basestation/console_server.hpp"
#include "rover/basestation/map.hpp"
#include "rover/basestation/mission_log.hpp"
#include "rover/basestation/station.hpp"

using namespace rover;
using namespace rover::base;
using nlohmann::json;

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

const char* kHelp =
    "commands: estop | clear | stop | drive <throttle> <steer_deg> | keys [WASD] |\n"
    "          waypoints <lat,lon> [<lat,lon> ...] | start | abort | sensors | drill |\n"
    "          {json console command} | quit\n";

/// Translates one operator line into a console command; nullopt for quit.
std::optional<json> parse_line(const std::string& line) {
  if (!line.empty() && line.front() == '{') return json::parse(line);
  std::istringstream in(line);
  std::string word;
  in >> word;
  if (word == "quit" || word == "exit") return std::nullopt;
  if (word == "estop") return json{{"type", "eStop"}};
  if (word == "clear") return json{{"type", "clearEStop"}};
  if (word == "stop") return json{{"type", "keys"}, {"pressed", json::array()}};
  if (word == "start") return json{{"type", "startAutonomy"}};
  if (word == "abort") return json{{"type", "abortAutonomy"}};
  if (word == "sensors") return json{{"type", "scienceCommand"}, {"action", "readSensors"}};
  if (word == "drill") return json{{"type", "scienceCommand"}, {"action", "drill"}};
  if (word == "drive") {
    double throttle = 0, steer = 0;
    if (!(in >> throttle >> steer)) throw std::invalid_argument("usage: drive <throttle> <steer_deg>");
    return json{{"type", "drive"}, {"throttle", throttle}, {"steerDeg", steer}};
  }
  if (word == "keys") {
    std::string keys;
    in >> keys;
    json pressed = json::array();
    for (char c : keys) pressed.push_back(std::string(1, c));
    return json{{"type", "keys"}, {"pressed", pressed}};
  }
  if (word == "waypoints") {
    json wps = json::array();
    for (std::string tok; in >> tok;) {
      const auto comma = tok.find(',');
      if (comma == std::string::npos) throw std::invalid_argument("waypoints are lat,lon pairs");
      wps.push_back({{"lat", std::stod(tok.substr(0, comma))}, {"lon", std::stod(tok.substr(comma + 1))}});
    }
    return json{{"type", "setWaypoints"}, {"points", wps}};
  }
  throw std::invalid_argument("unknown command \"" + word + "\"\n" + kHelp);
}

/// Reads operator commands until quit, or end of input when `eof_quits`.
void read_operator(ConsoleBridge& bridge, bool eof_quits) {
  for (std::string line; !g_stop && std::getline(std::cin, line);) {
    if (line.empty()) continue;
    try {
      const auto cmd = parse_line(line);
      if (!cmd) {
        g_stop = true;
        return;
      }
      bridge.console_command(*cmd);
    } catch (const ConsoleRejected& e) {
      std::cerr << "refused: " << e.what() << '\n';
    } catch (const std::exception& e) {
      std::cerr << e.what() << '\n';
    }
  }
  if (eof_quits) g_stop = true;
}

void report(const json& ev) {
  const auto type = ev.value("type", "");
  if (type == "status")
    std::cout << "link " << ev.value("status", "") << " (" << ev.value("reason", "") << ")" << std::endl;
  else if (type == "ack")
    std::cout << "ack " << ev.value("command", "") << " #" << ev.value("seq", 0) << " "
              << (ev.value("accepted", false) ? "accepted" : "refused") << std::endl;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Base station: rover control, telemetry log, map trail and operator console"};
  app.require_subcommand(1);
  auto* connect = app.add_subcommand("connect", "Connect to a rover");
  std::string rover_addr, map_image, bounds_text, log_dir, ui_dir, console_host = "127.0.0.1";
  std::uint16_t console_port = kDefaultConsolePort;
  std::uint16_t telemetry_port = proto::kDefaultTelemetryPort;
  double duration_s = 0;
  bool no_stdin = false;
  connect->add_option("--rover", rover_addr, "Rover control address host:port")->required();
  auto* map_opt = connect->add_option("--map", map_image, "Offline map image for the trail export");
  auto* bounds_opt = connect->add_option("--bounds", bounds_text, "Map bounds lat1,lon1,lat2,lon2");
  map_opt->needs(bounds_opt);
  connect->add_option("--log", log_dir, "Directory for mission.ndjson and the trail export");
  connect->add_option("--console-port", console_port, "Operator console port (0 picks a free port)");
  connect->add_option("--console-host", console_host, "Operator console bind address");
  connect->add_option("--ui", ui_dir, "Console bundle directory to serve at /")->check(CLI::ExistingDirectory);
  connect->add_option("--telemetry-port", telemetry_port, "UDP port to receive telemetry on");
  connect->add_option("--duration", duration_s, "Exit after this many seconds (0 runs until quit or end of input)");
  connect->add_flag("--no-stdin", no_stdin, "Do not read operator commands from standard input");
  CLI11_PARSE(app, argc, argv);

  try {
    StationOptions options;
    options.rover = parse_rover_address(rover_addr);
    options.telemetry_port = telemetry_port;
    std::optional<Bounds> bounds;
    if (!bounds_text.empty()) bounds = parse_bounds(bounds_text);

    std::ofstream log_file;
    if (!log_dir.empty()) {
      std::filesystem::create_directories(log_dir);
      log_file.open(std::filesystem::path(log_dir) / "mission.ndjson", std::ios::app);
      if (!log_file) throw std::runtime_error("cannot write to " + log_dir);
    }

    ConsoleBridge bridge(log_file.is_open() ? &log_file : nullptr);
    BaseStation station(bridge, options);
    ConsoleServer server(bridge, ui_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(ui_dir));
    const auto bound = server.start(console_host, console_port);
    std::cout << "console on http://" << console_host << ":" << bound << "/ (events at /live)" << std::endl;
    std::cout << "telemetry on udp port " << station.telemetry_port() << std::endl;

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    if (!no_stdin) {
      std::cout << kHelp << std::flush;
      std::thread(read_operator, std::ref(bridge), duration_s <= 0).detach();
    }

    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    std::uint64_t seen = bridge.feed().last_id();
    while (!g_stop) {
      const auto now = std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - start).count();
      if (duration_s > 0 && now >= duration_s * 1000) break;
      station.step(now);
      for (const auto& [id, ev] : bridge.feed().wait_after(seen, std::chrono::milliseconds(10))) {
        seen = id;
        report(ev);
      }
    }

    server.stop();
    bridge.flush_log();
    if (!log_dir.empty()) {
      try {
        const auto out = export_trail(bridge.log_copy(), {Canvas{}, bounds,
                                                          map_image.empty() ? std::nullopt : std::optional(map_image)});
        write_file(std::filesystem::path(log_dir) / "trail.svg", out.svg);
        write_file(std::filesystem::path(log_dir) / "trail.csv", out.csv);
        std::cout << "trail written to " << log_dir << std::endl;
      } catch (const EmptyLog&) {
        std::cout << "no fixes received; trail not written" << std::endl;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "basestation: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
