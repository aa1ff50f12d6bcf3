#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "generators.hpp"
#include "oracles.hpp"
#include "rover/geodesy.hpp"
#include "rover/nmea.hpp"
#include "rover/onboard/controller.hpp"
#include "rover/protocol/codec.hpp"
#include "rover/protocol/session.hpp"
#include "rover/science/science.hpp"
#include "rover/sim/digest.hpp"
#include "rover/sim/runner.hpp"
#include "rover/sim/world.hpp"

using namespace rover;
using clock_type = std::chrono::steady_clock;

namespace {

const geo::GeoPoint kCourseStart(23.7806, 90.4070);

int g_failed = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
  if (!pass) ++g_failed;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void geodesy_oracle() {
  const auto t0 = clock_type::now();
  gen::Rng rng(1001);
  double worst_dist = 0.0, worst_round = 0.0;
  int compared = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto a = gen::point(rng), b = gen::point(rng);
    const double ours = geo::haversine_distance(a, b);
    const double oracle = oracle::vincenty_distance(a.lat(), a.lon(), b.lat(), b.lon());
    if (oracle > 1000.0) {
      worst_dist = std::max(worst_dist, std::abs(ours - oracle) / oracle);
      ++compared;
    }
    const double d = std::pow(10.0, gen::uniform(rng, 0.0, 6.0));
    const geo::HeadingDeg theta(gen::uniform(rng, 0.0, 360.0));
    const auto end = geo::destination_point(a, theta, d);
    worst_round = std::max(worst_round, std::abs(geo::haversine_distance(a, end) - d) / d);
    const double bearing_err = std::abs(geo::angular_difference(geo::initial_bearing(a, end), theta)) / 360.0;
    worst_round = std::max(worst_round, bearing_err);
  }
  const double secs = seconds_since(t0);
  report("geodesy_oracle", worst_dist < 1e-9 && worst_round < 1e-6 && secs < 1.0,
         fmt("1000 pairs (%d beyond 1 km): max rel err vs Vincenty %.3g (tol 1e-9); "
             "destination round-trip max rel err %.3g (tol 1e-6); %.3f s (limit 1 s)",
             compared, worst_dist, worst_round, secs));
}

void nmea_fuzz_round_trip() {
  const auto t0 = clock_type::now();
  gen::Rng rng(2002);
  int crashes = 0, accepted = 0;
  std::uniform_int_distribution<int> byte(0, 255), len(0, 120);
  const std::string alphabet = "$GPGGARMC,*0123456789ABCDEF.NSEW-\r\n ";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  for (int i = 0; i < 100000; ++i) {
    std::string s;
    switch (i % 3) {
      case 0:  // arbitrary bytes
        s.resize(static_cast<std::size_t>(len(rng)));
        for (auto& c : s) c = static_cast<char>(byte(rng));
        break;
      case 1:  // sentence-like characters
        s = "$GPGGA,";
        for (int n = len(rng); n > 0; --n) s += alphabet[pick(rng)];
        break;
      default: {  // a valid sentence with a few bytes mutated, checksum usually repaired
        s = nmea::encode_fix(gen::fix(rng)).to_string();
        const auto star = s.find('*');
        for (int n = gen::uniform_int(rng, 1, 3); n > 0; --n) {
          const auto at = static_cast<std::size_t>(gen::uniform_int(rng, 1, static_cast<int>(star) - 1));
          s[at] = gen::uniform_int(rng, 0, 1) ? alphabet[pick(rng)] : static_cast<char>(byte(rng));
        }
        if (i % 2 == 0 && s.find('*') == star) {
          char sum[3];
          std::snprintf(sum, sizeof sum, "%02X", oracle::nmea_xor(std::string_view(s).substr(1, star - 1)));
          s.replace(star + 1, 2, sum);
        }
        if (gen::uniform_int(rng, 0, 4) == 0) s.resize(static_cast<std::size_t>(gen::uniform_int(rng, 0, static_cast<int>(s.size()))));
      }
    }
    try {
      const auto sentence = nmea::parse_sentence(s);
      ++accepted;
      (void)nmea::to_fix(sentence);
    } catch (const nmea::NmeaError&) {
    } catch (...) {
      ++crashes;
    }
  }
  int not_fixed = 0;
  for (int i = 0; i < 10000; ++i) {
    try {
      const std::string first = nmea::encode_fix(gen::fix(rng)).to_string();
      const std::string second = nmea::encode_fix(nmea::to_fix(nmea::parse_sentence(first))).to_string();
      if (first != second) ++not_fixed;
    } catch (...) {
      ++not_fixed;
    }
  }
  const double secs = seconds_since(t0);
  report("nmea_fuzz_round_trip", crashes == 0 && not_fixed == 0 && secs < 10.0,
         fmt("1e5 random inputs: %d unexpected exceptions (%d parsed); 1e4 fixes: %d not a fixed point of "
             "encode-parse-encode; %.2f s (limit 10 s)",
             crashes, accepted, not_fixed, secs));
}

void protocol_reassembly() {
  gen::Rng rng(3003);
  std::vector<proto::Message> messages;
  proto::Bytes stream;
  for (int i = 0; i < 1000; ++i) {
    messages.push_back(gen::message(rng));
    const auto frame = proto::encode(messages.back());
    stream.insert(stream.end(), frame.begin(), frame.end());
  }
  int bad_chunkings = 0;
  const int chunkings = 200;
  for (int k = 0; k < chunkings; ++k) {
    const int max_chunk = k % 4 == 0 ? 1 : gen::uniform_int(rng, 1, 4096);
    proto::FrameDecoder decoder;
    std::vector<proto::Message> out;
    for (std::size_t at = 0; at < stream.size();) {
      const auto n = std::min<std::size_t>(static_cast<std::size_t>(gen::uniform_int(rng, 1, max_chunk)),
                                           stream.size() - at);
      decoder.feed(std::span(stream).subspan(at, n));
      at += n;
      while (auto m = decoder.next()) out.push_back(std::move(*m));
    }
    if (out != messages || decoder.buffered() != 0) ++bad_chunkings;
  }
  int identity_failures = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto m = gen::message(rng);
    const auto bytes = proto::encode(m);
    const auto r = proto::decode(bytes);
    if (r.status != proto::DecodeStatus::Ok || !r.message || *r.message != m || r.consumed != bytes.size())
      ++identity_failures;
  }
  report("protocol_reassembly", bad_chunkings == 0 && identity_failures == 0,
         fmt("%d/%d random re-chunkings of a 1000-message stream (%zu bytes) decoded differently; "
             "%d/10000 generated messages failed decode(encode(m)) == m",
             bad_chunkings, chunkings, stream.size(), identity_failures));
}

struct CourseStats {
  int arrived = 0;
  int vision_all = 0;  // seeds with a vision entry within the radius at every waypoint
  double worst_fix = 0.0;
  double worst_true = 0.0;
};

CourseStats run_course(double gps_radius_m, double compass_sigma_deg) {
  const auto scenario = sim::course_scenario(kCourseStart, gps_radius_m, compass_sigma_deg);
  const double radius = onboard::AutonomyParams{}.vision_takeover_radius_m;
  CourseStats st;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto r = sim::run_scenario(scenario, seed);
    st.arrived += r.arrived();
    std::vector<bool> seen(scenario.waypoints.size(), false);
    bool within = true;
    for (const auto& v : r.vision_entries) {
      seen.at(v.waypoint_index) = true;
      within = within && v.fix_distance_m <= radius;
      st.worst_fix = std::max(st.worst_fix, v.fix_distance_m);
      st.worst_true = std::max(st.worst_true, v.true_distance_m);
    }
    if (within && std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) ++st.vision_all;
  }
  return st;
}

void course_scenario() {
  const auto t0 = clock_type::now();
  const auto noisy = run_course(3.0, 2.0);
  const auto clean = run_course(0.0, 0.0);
  const double secs = seconds_since(t0);
  const bool pass = noisy.arrived >= 95 && noisy.vision_all >= noisy.arrived && noisy.worst_fix <= 3.5 &&
                    clean.arrived == 100 && clean.vision_all == 100 && secs < 30.0;
  report("course_scenario", pass,
         fmt("noise 3 m / 2 deg: arrived %d/100 (need >= 95), vision entered within 3.5 m at every waypoint "
             "in %d/100, worst fix distance at handover %.2f m (true %.2f m); noise 0: arrived %d/100 "
             "(need 100), vision at every waypoint %d/100, worst true %.2f m; %.1f s (limit 30 s)",
             noisy.arrived, noisy.vision_all, noisy.worst_fix, noisy.worst_true, clean.arrived, clean.vision_all,
             clean.worst_true, secs));
}

bool actuators_zero(const onboard::RoverState& s, const onboard::DriveState& cmd) {
  return cmd.all_zero() && s.drive.all_zero() &&
         std::all_of(s.arm.joint_rate.begin(), s.arm.joint_rate.end(), [](double r) { return r == 0.0; });
}

void safety_estop() {
  gen::Rng rng(4004);
  const onboard::ControllerConfig cfg;
  int trials = 0, violations = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    auto [a, b] = proto::make_loopback_pair();
    proto::ControlSession base(proto::Role::Client, std::move(a), 0);
    proto::ControlSession rover_side(proto::Role::Server, std::move(b), 0);
    onboard::RoverState state;
    state.power = cfg.power;
    const int estop_tick = gen::uniform_int(rng, 0, 20);
    bool estopped = false;
    for (int tick = 0; tick <= estop_tick + 5; ++tick) {
      const std::int64_t now = tick * cfg.tick_ms;
      std::vector<proto::Message> batch;
      for (int k = gen::uniform_int(rng, 0, 4); k > 0; --k) {
        auto m = gen::message(rng);
        if (std::holds_alternative<proto::Drive>(m) || std::holds_alternative<proto::ArmJoint>(m) ||
            std::holds_alternative<proto::StartAutonomy>(m) || std::holds_alternative<proto::SetWaypoints>(m) ||
            std::holds_alternative<proto::ScienceCommand>(m))
          batch.push_back(std::move(m));
      }
      if (tick == estop_tick)
        batch.insert(batch.begin() + gen::uniform_int(rng, 0, static_cast<int>(batch.size())), proto::EStop{});
      for (auto& m : batch) base.send(std::move(m));
      rover_side.poll(now);
      while (auto m = rover_side.receive())
        for (auto& reply : onboard::handle_message(*m, state, cfg)) rover_side.send(std::move(reply));
      onboard::TickInputs in;
      in.compass = geo::HeadingDeg(0.0);
      in.imu = onboard::ImuSample{{0, 0, 1}, {0, 0, 0}};
      const auto cmd = onboard::control_tick(state, in, cfg);
      estopped = estopped || tick >= estop_tick;
      if (estopped) {
        ++trials;
        if (!actuators_zero(state, cmd) || !state.drive.estopped) ++violations;
      }
      base.poll(now);
      while (base.receive()) {
      }
    }
  }
  report("safety_estop", violations == 0,
         fmt("2000 random command interleavings: %d of %d ticks at or after the EStop tick had a non-zero "
             "actuator output (tol 0; EStop applied within the 50 ms tick it arrives in)",
             violations, trials));
}

void safety_link_death() {
  const onboard::ControllerConfig cfg;
  const std::int64_t limit = cfg.watchdog_ms + cfg.tick_ms;
  std::int64_t worst = 0;
  int missing = 0;
  const int runs = 20;
  for (int i = 0; i < runs; ++i) {
    sim::Scenario s;
    s.name = "link_death";
    s.start.pos = kCourseStart;
    s.start.heading = geo::HeadingDeg(90.0);
    s.base = kCourseStart;
    s.duration_s = 1400.0;
    s.stop_when_done = false;
    s.commands.push_back({0, proto::Drive{0, 0.8 + 0.01 * i, 0.0}});
    sim::MissionRunner runner(s, static_cast<std::uint64_t>(100 + i), cfg);
    while (runner.tick() && !runner.result().halted_at_ms) {
    }
    const auto& r = runner.result();
    if (!r.link_dead_at_ms || !r.halted_at_ms) {
      ++missing;
      continue;
    }
    worst = std::max(worst, *r.halted_at_ms - *r.link_dead_at_ms);
  }
  report("safety_link_death", missing == 0 && worst <= limit,
         fmt("%d runs driven past 1050 m: worst halt %lld ms after the link died (limit %lld ms = watchdog "
             "2000 + one 50 ms tick); %d runs never halted",
             runs, static_cast<long long>(worst), static_cast<long long>(limit), missing));
}

void safety_steer_limit() {
  gen::Rng rng(5005);
  const onboard::ControllerConfig cfg;
  onboard::RoverState state;
  state.power = cfg.power;
  double worst = 0.0;
  std::uniform_real_distribution<double> huge(-1e9, 1e9);
  for (int i = 0; i < 100000; ++i) {
    const double steer = i % 3 == 0 ? huge(rng) : gen::uniform(rng, -180, 180);
    onboard::handle_message(proto::Drive{static_cast<std::uint64_t>(i + 1), gen::uniform(rng, -1, 1), steer}, state,
                            cfg);
    onboard::TickInputs in;
    in.imu = onboard::ImuSample{{0, 0, 1}, {0, 0, 0}};
    const auto cmd = onboard::control_tick(state, in, cfg);
    worst = std::max({worst, std::abs(cmd.steer_deg), std::abs(state.drive.steer_deg)});
  }
  report("safety_steer_limit", worst <= 35.0,
         fmt("1e5 fuzzed Drive inputs: max |steer| %.6f deg (limit 35)", worst));
}

void traversability_anchors() {
  using sim::TerrainKind;
  struct Anchor {
    TerrainKind kind;
    double angle, height;
    bool passable;
  };
  const Anchor anchors[] = {
      {TerrainKind::VerticalDrop, 90.0, 0.7, true}, {TerrainKind::VerticalDrop, 90.0, 0.8, false},
      {TerrainKind::VerticalDrop, 60.0, 0.45, true}, {TerrainKind::Slope, 35.0, 1.2, true},
      {TerrainKind::Slope, 35.01, 1.2, false},       {TerrainKind::Slope, 35.0, 1.21, false},
  };
  int mismatches = 0;
  std::string detail;
  for (const auto& a : anchors) {
    const bool got = sim::traversable({a.kind, kCourseStart, 1.0, a.angle, a.height});
    mismatches += got != a.passable;
    detail += fmt("%s(%g deg, %g m)=%s ", sim::to_string(a.kind), a.angle, a.height,
                  got ? "passable" : "impassable");
  }
  report("traversability_anchors", mismatches == 0, detail + fmt("; %d mismatches (exact)", mismatches));
}

void power_model() {
  const auto sections = onboard::default_power_sections();
  const auto& drive = sections.at(0);
  bool packs_ok = drive.id == PowerSectionId::Drive && drive.series && drive.packs.size() == 2;
  for (const auto& p : drive.packs) packs_ok = packs_ok && p.nominal_v == 11.1;

  std::ostringstream trace;
  const auto result = sim::run_scenario(sim::course_scenario(kCourseStart), 1, &trace);
  std::istringstream in(trace.str());
  std::size_t lines = 0, increases = 0, wrong_bus = 0;
  std::vector<double> last;
  for (std::string line; std::getline(in, line); ++lines) {
    const auto power = nlohmann::json::parse(line)["snapshot"]["power"];
    last.resize(power.size(), 1.0);
    for (std::size_t i = 0; i < power.size(); ++i) {
      const double c = power[i]["chargeFraction"];
      increases += c > last[i];
      last[i] = c;
      if (power[i]["section"] == "drive" && std::abs(power[i]["busV"].get<double>() - 22.2) > 1e-9) ++wrong_bus;
    }
  }
  report("power_model", packs_ok && std::abs(drive.bus_v - 22.2) <= 1e-9 && wrong_bus == 0 && increases == 0 &&
                            result.charge_monotone && lines > 0,
         fmt("drive bus %.4f V from %zu series packs of 11.1 V (expect 22.2, tol 1e-9); recorded mission trace "
             "of %zu ticks: %zu charge increases, %zu drive bus readings off 22.2 V; final drive charge %.6f",
             drive.bus_v, drive.packs.size(), lines, increases, wrong_bus, last.empty() ? 0.0 : last[0]));
}

void science_checks() {
  int mismatches = 0;
  for (int k = 0; k <= 1400; ++k) {
    const bool expected = k >= 650 && k <= 900;
    mismatches += science::ph_habitable(k / 100.0) != expected;
  }
  const double fraction = science::biomass_fraction(100.0, 90.0);
  report("science", mismatches == 0 && fraction == 0.10,
         fmt("pH scan 0.00..14.00 step 0.01 vs closed band [6.5, 9.0]: %d mismatches; "
             "biomass_fraction(100, 90) = %.17g (expect 0.10 exactly)",
             mismatches, fraction));
}

void determinism() {
  const auto course = sim::course_scenario(kCourseStart);
  const auto a = sim::run_scenario(course, 42);
  const auto b = sim::run_scenario(course, 42);
  const auto other = sim::run_scenario(course, 43);
  const auto ha = sim::sha256_hex(a.telemetry_log), hb = sim::sha256_hex(b.telemetry_log);
  const auto hc = sim::sha256_hex(other.telemetry_log);
  report("determinism", ha == hb && !a.telemetry_log.empty() && ha != hc,
         fmt("course seed 42 twice: sha256 %.16s... vs %.16s... (%zu bytes, must match); seed 43 differs: %s",
             ha.c_str(), hb.c_str(), a.telemetry_log.size(), ha != hc ? "yes" : "no"));
}

}  // namespace

int main() {
  geodesy_oracle();
  nmea_fuzz_round_trip();
  protocol_reassembly();
  course_scenario();
  safety_estop();
  safety_link_death();
  safety_steer_limit();
  traversability_anchors();
  power_model();
  science_checks();
  determinism();
  std::cout << (g_failed == 0 ? "ALL PASS" : fmt("%d FAILED", g_failed)) << std::endl;
  return g_failed == 0 ? 0 : 1;
}
