#include "rover/science/science.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

namespace rover::science {

namespace {

constexpr const char* kMarsContext =
    "reference: Mars surface radiation about 0.67 mSv/day; surface gravity 37.5% of Earth";

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double number(const std::string& cell, const std::string& column) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v))
    throw ScienceError(ScienceErrc::BadRow, column + ": not a number '" + cell + "'");
  return v;
}

}  // namespace

const char* to_string(ScienceErrc code) {
  switch (code) {
    case ScienceErrc::OutOfScale: return "outOfScale";
    case ScienceErrc::NonPositiveMass: return "nonPositiveMass";
    case ScienceErrc::MassGain: return "massGain";
    case ScienceErrc::NegativeMass: return "negativeMass";
    case ScienceErrc::BadRow: return "badRow";
  }
  return "?";
}

const char* to_string(CapillaryClass c) {
  switch (c) {
    case CapillaryClass::Low: return "low";
    case CapillaryClass::Medium: return "medium";
    case CapillaryClass::High: return "high";
    case CapillaryClass::Unknown: return "unknown";
  }
  return "?";
}

bool ph_habitable(double ph) {
  if (!(ph >= 0.0 && ph <= 14.0)) throw ScienceError(ScienceErrc::OutOfScale, "pH outside 0-14");
  return ph >= kLifeBandMinPh && ph <= kLifeBandMaxPh;
}

double biomass_fraction(double before, double after) {
  if (!(before > 0.0) || !std::isfinite(before))
    throw ScienceError(ScienceErrc::NonPositiveMass, "mass before heating must be positive");
  if (!(after >= 0.0)) throw ScienceError(ScienceErrc::NegativeMass, "mass after heating is negative");
  if (after > before) throw ScienceError(ScienceErrc::MassGain, "sample gained mass on heating");
  return (before - after) / before;
}

CapillaryClass classify_capillary(std::optional<double> rise, const CapillaryThresholds& t) {
  if (!rise || !std::isfinite(*rise)) return CapillaryClass::Unknown;
  if (*rise < t.medium_from) return CapillaryClass::Low;
  if (*rise < t.high_from) return CapillaryClass::Medium;
  return CapillaryClass::High;
}

HabitabilityReport analyze(const SoilSample& s, const CapillaryThresholds& t) {
  HabitabilityReport r;
  r.ph_in_life_band = ph_habitable(s.ph);
  r.volatile_fraction = biomass_fraction(s.mass_before_g, s.mass_after_g);
  r.capillary_class = classify_capillary(s.capillary_rise_mm_per_min, t);
  r.notes = kMarsContext;
  return r;
}

std::vector<SampleRow> read_samples(std::istream& in) {
  static const char* kRequired[] = {"depth_cm", "ph", "mass_before_g", "mass_after_g"};
  std::vector<SampleRow> rows;
  std::map<std::string, std::size_t> column;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto cells = split_row(t);
    if (!have_header) {
      for (std::size_t i = 0; i < cells.size(); ++i) column[cells[i]] = i;
      for (const char* name : kRequired)
        if (!column.contains(name))
          throw ScienceError(ScienceErrc::BadRow, std::string("header lacks column ") + name);
      have_header = true;
      continue;
    }

    SampleRow row;
    row.line = line_no;
    try {
      auto cell = [&](const std::string& name) -> std::string {
        const auto i = column.at(name);
        return i < cells.size() ? cells[i] : std::string{};
      };
      SoilSample s;
      s.depth_cm = number(cell("depth_cm"), "depth_cm");
      s.ph = number(cell("ph"), "ph");
      s.mass_before_g = number(cell("mass_before_g"), "mass_before_g");
      s.mass_after_g = number(cell("mass_after_g"), "mass_after_g");
      if (column.contains("capillary_rise_mm_per_min")) {
        const auto rise = cell("capillary_rise_mm_per_min");
        if (!rise.empty()) s.capillary_rise_mm_per_min = number(rise, "capillary_rise_mm_per_min");
      }
      row.sample = s;
    } catch (const ScienceError& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  if (!have_header) throw ScienceError(ScienceErrc::BadRow, "input has no header row");
  return rows;
}

std::string analyze_to_json_lines(const std::vector<SampleRow>& rows, const CapillaryThresholds& t) {
  std::string out;
  for (const auto& row : rows) {
    nlohmann::json j;
    j["line"] = row.line;
    if (!row.sample) {
      j["error"] = to_string(ScienceErrc::BadRow);
      j["detail"] = row.error;
    } else {
      j["depthCm"] = row.sample->depth_cm;
      try {
        const auto r = analyze(*row.sample, t);
        j["phInLifeBand"] = r.ph_in_life_band;
        j["volatileFraction"] = r.volatile_fraction;
        j["capillaryClass"] = to_string(r.capillary_class);
        j["notes"] = r.notes;
      } catch (const ScienceError& e) {
        j["error"] = to_string(e.code());
        j["detail"] = e.what();
      }
    }
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace rover::science
