#include <atomic>
#include <csignal>
#include <cstdint>
#include <iostream>

#include <CLI11.hpp>

#include "rover/onboard/config.hpp"
#include "rover/sim/rover_node.hpp"
#include "rover/sim/scenario.hpp"

using namespace rover;

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rover daemon: onboard controller driving the simulated plant"};
  std::string config_path, scenario_path, bind = "0.0.0.0";
  std::uint64_t seed = 1;
  std::optional<std::uint16_t> port, telemetry_port;
  app.add_option("--config", config_path, "Controller config file (default: $ROVER_CONFIG, then ./rover.conf)");
  app.add_option("--scenario", scenario_path, "Field to simulate (start pose, terrain, beacons, noise)")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Random seed for the simulated sensors");
  app.add_option("--port", port, "Control port (overrides the config)");
  app.add_option("--telemetry-port", telemetry_port, "Peer UDP telemetry port (overrides the config)");
  app.add_option("--bind", bind, "Address to listen on");
  CLI11_PARSE(app, argc, argv);

  try {
    onboard::ControllerConfig config;
    const auto resolved = onboard::resolve_config_path(
        config_path.empty() ? std::nullopt : std::optional<std::filesystem::path>(config_path));
    if (resolved) config = onboard::load_config(*resolved);
    if (port) config.control_port = *port;
    if (telemetry_port) config.telemetry_port = *telemetry_port;

    const sim::Scenario field = scenario_path.empty() ? sim::course_scenario(geo::GeoPoint(23.7806, 90.4070))
                                                      : sim::load_scenario(scenario_path);

    sim::RoverNode node(field, seed, config, bind);
    node.log_to(&std::cerr);
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "roverd: control on " << bind << ":" << node.control_port() << ", telemetry to peer port "
              << config.telemetry_port << (resolved ? ", config " + resolved->string() : "") << std::endl;
    node.run(g_stop);
  } catch (const std::exception& e) {
    std::cerr << "roverd: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
