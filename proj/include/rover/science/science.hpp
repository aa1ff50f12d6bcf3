#pragma once

#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rover::science {

enum class ScienceErrc { OutOfScale, NonPositiveMass, MassGain, NegativeMass, BadRow };

class ScienceError : public std::runtime_error {
 public:
  ScienceError(ScienceErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ScienceErrc code() const { return code_; }

 private:
  ScienceErrc code_;
};

const char* to_string(ScienceErrc code);

struct SoilSample {
  double depth_cm = 0.0;
  double ph = 7.0;
  double mass_before_g = 0.0;
  double mass_after_g = 0.0;  // after heating
  std::optional<double> capillary_rise_mm_per_min;
};

enum class CapillaryClass { Low, Medium, High, Unknown };

const char* to_string(CapillaryClass c);

/// Rise-rate thresholds in mm/min: Low below `medium_from`, High from
/// `high_from`, Medium in between.
struct CapillaryThresholds {
  double medium_from = 1.0;
  double high_from = 5.0;
};

struct HabitabilityReport {
  bool ph_in_life_band = false;
  double volatile_fraction = 0.0;
  CapillaryClass capillary_class = CapillaryClass::Unknown;
  std::string notes;
};

inline constexpr double kLifeBandMinPh = 6.5;
inline constexpr double kLifeBandMaxPh = 9.0;

/// True iff 6.5 <= ph <= 9.0. Throws ScienceError{OutOfScale} outside [0, 14].
bool ph_habitable(double ph);

/// Mass fraction lost on heating: (before - after) / before.
/// Throws NonPositiveMass if before <= 0, NegativeMass if after < 0,
/// MassGain if after > before.
double biomass_fraction(double mass_before_g, double mass_after_g);

CapillaryClass classify_capillary(std::optional<double> rise_mm_per_min,
                                  const CapillaryThresholds& thresholds = {});

HabitabilityReport analyze(const SoilSample& sample, const CapillaryThresholds& thresholds = {});

/// One input row: either a parsed sample or the reason it was rejected.
struct SampleRow {
  std::size_t line = 0;
  std::optional<SoilSample> sample;
  std::string error;
};

/// Reads a comma-separated table with a header row naming the columns
/// depth_cm, ph, mass_before_g, mass_after_g and optionally
/// capillary_rise_mm_per_min (empty cell = not measured). Column order is
/// free; blank lines and lines starting with '#' are skipped. Throws
/// ScienceError{BadRow} when the header lacks a required column.
std::vector<SampleRow> read_samples(std::istream& in);

/// Analyzes every row and returns one JSON object per line.
std::string analyze_to_json_lines(const std::vector<SampleRow>& rows,
                                  const CapillaryThresholds& thresholds = {});

}  // namespace rover::science
