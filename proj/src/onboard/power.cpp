#include "rover/onboard/power.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rover::onboard {

PowerSection make_section(PowerSectionId id, std::vector<BatteryPack> packs, bool series,
                          std::vector<double> taps_v) {
  if (packs.empty()) throw std::invalid_argument("power section needs at least one pack");
  for (const auto& p : packs) {
    if (!(p.capacity_mah > 0.0) || !(p.nominal_v > 0.0))
      throw std::invalid_argument("pack capacity and voltage must be positive");
    if (!(p.charge_fraction >= 0.0 && p.charge_fraction <= 1.0))
      throw std::invalid_argument("pack charge fraction outside [0, 1]");
    if (!series && p.nominal_v != packs.front().nominal_v)
      throw std::invalid_argument("parallel packs must share a nominal voltage");
  }
  PowerSection s{id, std::move(packs), series, 0.0, std::move(taps_v)};
  s.bus_v = bus_voltage(s);
  return s;
}

double bus_voltage(const PowerSection& section) {
  if (section.packs.empty()) return 0.0;
  if (!section.series) return section.packs.front().nominal_v;
  double v = 0.0;
  for (const auto& p : section.packs) v += p.nominal_v;
  return v;
}

std::vector<PowerSection> default_power_sections() {
  return {
      make_section(PowerSectionId::Drive, {{10000, 11.1}, {10000, 11.1}}, true),
      make_section(PowerSectionId::Compute, {{5400, 11.1}}, false, {12.0, 5.0}),
      make_section(PowerSectionId::Comms, {{5400, 11.1}, {5400, 11.1}}, true, {12.0, 5.0}),
  };
}

std::vector<PowerSection> power_step(std::vector<PowerSection> sections,
                                     std::span<const double> loads_a, std::int64_t dt_ms) {
  if (loads_a.size() != sections.size())
    throw std::invalid_argument("one load per power section required");
  if (dt_ms < 0) throw std::invalid_argument("dt must be non-negative");
  for (std::size_t i = 0; i < sections.size(); ++i) {
    const double amps = loads_a[i];
    if (!(amps >= 0.0)) throw std::invalid_argument("loads must be non-negative");
    auto& section = sections[i];
    const double per_pack_a = section.series ? amps : amps / static_cast<double>(section.packs.size());
    for (auto& pack : section.packs) {
      // mAh drawn = A * 1000 * hours
      const double drawn_mah = per_pack_a * 1000.0 * static_cast<double>(dt_ms) / 3.6e6;
      pack.charge_fraction = std::max(0.0, pack.charge_fraction - drawn_mah / pack.capacity_mah);
    }
    section.bus_v = bus_voltage(section);
  }
  return sections;
}

double charge_fraction(const PowerSection& section) {
  if (section.packs.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& p : section.packs) sum += p.charge_fraction;
  return sum / static_cast<double>(section.packs.size());
}

PowerReading to_reading(const PowerSection& section) {
  return {section.id, section.bus_v, charge_fraction(section), section.taps_v};
}

}  // namespace rover::onboard
