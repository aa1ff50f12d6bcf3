#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rover/onboard/config.hpp"
#include "rover/sim/digest.hpp"
#include "rover/sim/runner.hpp"
#include "rover/sim/scenario.hpp"

using namespace rover;

namespace {

nlohmann::json summary(const sim::RunResult& r) {
  nlohmann::json vision = nlohmann::json::array();
  for (const auto& v : r.vision_entries)
    vision.push_back({{"waypointIndex", v.waypoint_index},
                      {"tMs", v.t_ms},
                      {"fixDistanceM", v.fix_distance_m},
                      {"trueDistanceM", v.true_distance_m}});
  return {{"seed", r.seed},
          {"endTMs", r.end_t_ms},
          {"finalTag", to_string(r.final_tag)},
          {"faultReason", r.fault_reason ? nlohmann::json(*r.fault_reason) : nlohmann::json(nullptr)},
          {"waypointsReached", r.waypoints_reached},
          {"visionEntries", vision},
          {"maxAbsSteerDeg", r.max_abs_steer_deg},
          {"chargeMonotone", r.charge_monotone},
          {"telemetrySent", r.telemetry_sent},
          {"telemetryReceived", r.telemetry_received},
          {"telemetrySha256", sim::sha256_hex(r.telemetry_log)}};
}

void print_progress(const sim::MissionRunner& runner) {
  const auto& a = runner.state().autonomy;
  std::cout << std::fixed << std::setprecision(1) << "t=" << runner.world().t_ms / 1000.0 << "s"
            << " state=" << to_string(a.tag);
  if (!a.waypoints.empty()) std::cout << " waypoint=" << a.current_index + 1 << "/" << a.waypoints.size();
  std::cout << std::setprecision(6) << " lat=" << runner.world().rover.pos.lat()
            << " lon=" << runner.world().rover.pos.lon() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rover field simulator"};
  app.require_subcommand(1);
  auto* run = app.add_subcommand("run", "Run a scenario to completion");
  std::string scenario_path, record_path, config_path;
  std::uint64_t seed = 0;
  bool headless = false;
  run->add_option("--scenario", scenario_path, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Random seed")->required();
  run->add_flag("--headless", headless, "Print only the final summary");
  run->add_option("--record", record_path, "Write a per-tick NDJSON trace here");
  run->add_option("--config", config_path, "Controller config file");
  CLI11_PARSE(app, argc, argv);

  try {
    const auto scenario = sim::load_scenario(scenario_path);
    onboard::ControllerConfig config;
    const auto resolved =
        onboard::resolve_config_path(config_path.empty() ? std::nullopt : std::optional<std::filesystem::path>(config_path));
    if (resolved) config = onboard::load_config(*resolved);

    std::ofstream trace;
    if (!record_path.empty()) {
      trace.open(record_path);
      if (!trace) throw std::runtime_error("cannot write " + record_path);
    }

    sim::MissionRunner runner(scenario, seed, config);
    runner.record_to(trace.is_open() ? &trace : nullptr);
    if (!headless) std::cout << "scenario " << scenario.name << ", seed " << seed << '\n';
    for (bool more = true; more;) {
      more = runner.tick();
      if (!headless && (runner.world().t_ms % 1000 == 0 || !more)) print_progress(runner);
    }
    std::cout << summary(runner.result()).dump() << std::endl;
  } catch (const std::exception& e) {
    std::cerr << "sim: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
