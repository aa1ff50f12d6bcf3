#pragma once

#include <span>
#include <vector>

#include "rover/protocol/telemetry.hpp"

namespace rover::onboard {

struct BatteryPack {
  double capacity_mah = 0.0;
  double nominal_v = 0.0;
  double charge_fraction = 1.0;  // [0, 1]

  friend bool operator==(const BatteryPack&, const BatteryPack&) = default;
};

/// A group of packs feeding one bus. Series packs add their voltages; a
/// non-series section runs its packs in parallel at a common voltage.
struct PowerSection {
  PowerSectionId id = PowerSectionId::Drive;
  std::vector<BatteryPack> packs;
  bool series = false;
  double bus_v = 0.0;
  std::vector<double> taps_v;  // regulated converter outputs

  friend bool operator==(const PowerSection&, const PowerSection&) = default;
};

/// Builds a section and derives its bus voltage. Throws std::invalid_argument
/// for an empty pack list, non-positive ratings, or parallel packs whose
/// nominal voltages differ.
PowerSection make_section(PowerSectionId id, std::vector<BatteryPack> packs, bool series,
                          std::vector<double> taps_v = {});

/// Sum of pack voltages in series, the common pack voltage otherwise.
double bus_voltage(const PowerSection& section);

/// Drive: 2 x 10000 mAh 11.1 V in series. Compute: 1 x 5400 mAh 11.1 V with
/// 12 V / 5 V taps. Comms: 2 x 5400 mAh 11.1 V in series with 12 V / 5 V taps.
std::vector<PowerSection> default_power_sections();

/// Drains each section by its load current over `dt_ms`. `loads_a` is
/// parallel to `sections`. Series packs all carry the full current; parallel
/// packs share it evenly. Charge never drops below zero.
std::vector<PowerSection> power_step(std::vector<PowerSection> sections,
                                     std::span<const double> loads_a, std::int64_t dt_ms);

/// Mean charge fraction of a section's packs.
double charge_fraction(const PowerSection& section);

PowerReading to_reading(const PowerSection& section);

}  // namespace rover::onboard
