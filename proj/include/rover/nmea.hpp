#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rover/geodesy.hpp"

namespace rover::nmea {

enum class SentenceKind { GGA, RMC, Other };

enum class ErrorCode {
  BadChecksum,
  Malformed,
  NotPositional,
};

class NmeaError : public std::runtime_error {
 public:
  NmeaError(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// One checksum-verified NMEA 0183 sentence.
struct NmeaSentence {
  std::string talker;         // e.g. "GP"
  SentenceKind kind = SentenceKind::Other;
  std::string kind_tag;       // raw three-letter type, kept for opaque kinds
  std::vector<std::string> fields;
  std::uint8_t checksum = 0;

  /// Wire form, `$...*HH\r\n`.
  std::string to_string() const;
};

enum class FixQuality { NoFix, Fix, DGps };

struct GpsFix {
  std::optional<geo::GeoPoint> point;  // absent whenever quality == NoFix
  double utc_time = 0.0;               // seconds of day
  FixQuality quality = FixQuality::NoFix;
  int satellites = 0;
  std::optional<double> hdop;
  std::optional<double> altitude_m;

  bool has_position() const { return quality != FixQuality::NoFix && point.has_value(); }

  friend bool operator==(const GpsFix&, const GpsFix&) = default;
};

/// XOR of every byte strictly between `$` and `*`.
std::uint8_t checksum(std::string_view body);

/// Validates and splits a sentence. A trailing CR/LF is optional.
/// Throws NmeaError{Malformed | BadChecksum}.
NmeaSentence parse_sentence(std::string_view line);

/// Extracts a position fix from a GGA or RMC sentence.
/// Throws NmeaError{NotPositional} for other kinds and NmeaError{Malformed}
/// for unparsable numeric fields. A GGA quality of 0 or an RMC status of V
/// yields a fix with quality NoFix and no point.
GpsFix to_fix(const NmeaSentence& sentence);

/// Builds a GGA sentence (talker GP) with 4-decimal minute fields.
NmeaSentence encode_fix(const GpsFix& fix);

}  // namespace rover::nmea
