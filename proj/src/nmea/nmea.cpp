#include "rover/nmea.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace rover::nmea {

namespace {

// Minutes are carried with four decimals: one unit is 1e-4 minute.
constexpr long long kUnitsPerDegree = 60LL * 10'000;

[[noreturn]] void malformed(const std::string& why) { throw NmeaError(ErrorCode::Malformed, why); }

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

std::vector<std::string> split_fields(std::string_view body) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = body.find(',', start);
    if (comma == std::string_view::npos) {
      out.emplace_back(body.substr(start));
      return out;
    }
    out.emplace_back(body.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_double(std::string_view text, const char* what) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::fixed);
  if (text.empty() || ec != std::errc() || ptr != last || !std::isfinite(value))
    malformed(std::string("bad numeric field: ") + what);
  return value;
}

int parse_int(std::string_view text, const char* what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    malformed(std::string("bad integer field: ") + what);
  return value;
}

bool all_digits(std::string_view s) {
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

/// "ddmm.mmmm" / "dddmm.mmmm" plus hemisphere letter to signed decimal degrees.
double parse_coordinate(std::string_view value, std::string_view hemisphere, int degree_digits,
                        char positive, char negative) {
  const std::size_t dot = value.find('.');
  const std::size_t int_len = dot == std::string_view::npos ? value.size() : dot;
  if (int_len != static_cast<std::size_t>(degree_digits + 2)) malformed("coordinate width");
  if (!all_digits(value.substr(0, int_len))) malformed("coordinate digits");
  const int degrees = parse_int(value.substr(0, degree_digits), "coordinate degrees");
  const double minutes = parse_double(value.substr(degree_digits), "coordinate minutes");
  if (minutes >= 60.0) malformed("minutes out of range");
  double result = degrees + minutes / 60.0;
  if (hemisphere.size() != 1) malformed("hemisphere");
  if (hemisphere[0] == negative) {
    result = -result;
  } else if (hemisphere[0] != positive) {
    malformed("hemisphere");
  }
  return result;
}

double parse_time_of_day(std::string_view text) {
  if (text.empty()) return 0.0;
  if (text.size() < 6 || !all_digits(text.substr(0, 6))) malformed("utc time");
  const int hh = parse_int(text.substr(0, 2), "hours");
  const int mm = parse_int(text.substr(2, 2), "minutes");
  const double ss = parse_double(text.substr(4), "seconds");
  if (hh > 23 || mm > 59 || ss >= 61.0) malformed("utc time out of range");
  return hh * 3600.0 + mm * 60.0 + ss;
}

geo::GeoPoint parse_position(const std::vector<std::string>& f, std::size_t lat_index) {
  const double lat = parse_coordinate(f[lat_index], f[lat_index + 1], 2, 'N', 'S');
  const double lon = parse_coordinate(f[lat_index + 2], f[lat_index + 3], 3, 'E', 'W');
  if (std::abs(lat) > 90.0 || std::abs(lon) > 180.0) malformed("coordinate out of range");
  return {lat, lon};
}

const std::string& field_or_empty(const std::vector<std::string>& f, std::size_t i) {
  static const std::string empty;
  return i < f.size() ? f[i] : empty;
}

GpsFix gga_fix(const NmeaSentence& s) {
  const auto& f = s.fields;
  if (f.size() < 6) malformed("GGA too short");
  GpsFix fix;
  fix.utc_time = parse_time_of_day(f[0]);
  const int quality = parse_int(f[5], "quality");
  if (quality < 0) malformed("quality");
  if (quality != 0) {
    fix.quality = quality == 2 ? FixQuality::DGps : FixQuality::Fix;
    fix.point = parse_position(f, 1);
  }
  if (const auto& sats = field_or_empty(f, 6); !sats.empty()) {
    fix.satellites = parse_int(sats, "satellites");
    if (fix.satellites < 0) malformed("satellites");
  }
  if (const auto& hdop = field_or_empty(f, 7); !hdop.empty()) fix.hdop = parse_double(hdop, "hdop");
  if (const auto& alt = field_or_empty(f, 8); !alt.empty())
    fix.altitude_m = parse_double(alt, "altitude");
  return fix;
}

GpsFix rmc_fix(const NmeaSentence& s) {
  const auto& f = s.fields;
  if (f.size() < 6) malformed("RMC too short");
  GpsFix fix;
  fix.utc_time = parse_time_of_day(f[0]);
  if (f[1] == "V") return fix;
  if (f[1] != "A") malformed("RMC status");
  fix.quality = field_or_empty(f, 11) == "D" ? FixQuality::DGps : FixQuality::Fix;
  fix.point = parse_position(f, 2);
  return fix;
}

std::string format_coordinate(double value, int degree_digits, char positive, char negative,
                              long long antimeridian_units) {
  const long long units = std::llround(std::abs(value) * kUnitsPerDegree);
  const long long degrees = units / kUnitsPerDegree;
  const long long rem = units % kUnitsPerDegree;
  // A value that rounds onto the antimeridian is reported as east.
  const bool negative_side = value < 0.0 && units > 0 && units != antimeridian_units;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%0*lld%02lld.%04lld,%c", degree_digits, degrees, rem / 10'000,
                rem % 10'000, negative_side ? negative : positive);
  return buf;
}

}  // namespace

std::uint8_t checksum(std::string_view body) {
  std::uint8_t x = 0;
  for (char c : body) x ^= static_cast<std::uint8_t>(c);
  return x;
}

std::string NmeaSentence::to_string() const {
  std::string body = talker + kind_tag;
  for (const auto& field : fields) {
    body += ',';
    body += field;
  }
  char tail[8];
  std::snprintf(tail, sizeof tail, "*%02X\r\n", nmea::checksum(body));
  return "$" + body + tail;
}

NmeaSentence parse_sentence(std::string_view line) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.remove_suffix(1);
  if (line.empty()) malformed("empty sentence");
  if (line.front() != '$') malformed("missing '$'");
  for (char c : line) {
    const auto byte = static_cast<unsigned char>(c);
    if (byte < 0x20 || byte > 0x7E) malformed("non-printable or non-ASCII byte");
  }
  const std::size_t star = line.find('*');
  if (star == std::string_view::npos) malformed("missing '*'");
  if (line.size() != star + 3) malformed("checksum must be two hex digits");
  const int hi = hex_value(line[star + 1]);
  const int lo = hex_value(line[star + 2]);
  if (hi < 0 || lo < 0) malformed("checksum not hex");

  const std::string_view body = line.substr(1, star - 1);
  const auto expected = static_cast<std::uint8_t>(hi * 16 + lo);
  if (checksum(body) != expected) throw NmeaError(ErrorCode::BadChecksum, "checksum mismatch");

  auto parts = split_fields(body);
  const std::string& address = parts.front();
  if (address.size() != 5) malformed("address field must be talker + type");
  for (char c : address)
    if (!((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'))) malformed("address characters");

  NmeaSentence s;
  s.talker = address.substr(0, 2);
  s.kind_tag = address.substr(2);
  if (s.kind_tag == "GGA") {
    s.kind = SentenceKind::GGA;
  } else if (s.kind_tag == "RMC") {
    s.kind = SentenceKind::RMC;
  }
  s.fields.assign(std::make_move_iterator(parts.begin() + 1), std::make_move_iterator(parts.end()));
  s.checksum = expected;
  return s;
}

GpsFix to_fix(const NmeaSentence& sentence) {
  switch (sentence.kind) {
    case SentenceKind::GGA:
      return gga_fix(sentence);
    case SentenceKind::RMC:
      return rmc_fix(sentence);
    case SentenceKind::Other:
      break;
  }
  throw NmeaError(ErrorCode::NotPositional, "sentence carries no position: " + sentence.kind_tag);
}

NmeaSentence encode_fix(const GpsFix& fix) {
  if (fix.quality != FixQuality::NoFix && !fix.point)
    throw std::invalid_argument("a fix with quality other than NoFix needs a position");
  if (!std::isfinite(fix.utc_time)) throw std::invalid_argument("utc time must be finite");

  NmeaSentence s;
  s.talker = "GP";
  s.kind = SentenceKind::GGA;
  s.kind_tag = "GGA";

  constexpr long long kCentisPerDay = 24LL * 3600 * 100;
  long long centis = std::llround(fix.utc_time * 100.0) % kCentisPerDay;
  if (centis < 0) centis += kCentisPerDay;
  char time_buf[16];
  std::snprintf(time_buf, sizeof time_buf, "%02lld%02lld%02lld.%02lld", centis / 360000,
                centis / 6000 % 60, centis / 100 % 60, centis % 100);
  s.fields.emplace_back(time_buf);

  if (fix.quality != FixQuality::NoFix) {
    const std::string lat = format_coordinate(fix.point->lat(), 2, 'N', 'S', -1);
    const std::string lon = format_coordinate(fix.point->lon(), 3, 'E', 'W', 180 * kUnitsPerDegree);
    for (const std::string* coord : {&lat, &lon}) {
      const auto comma = coord->find(',');
      s.fields.push_back(coord->substr(0, comma));
      s.fields.push_back(coord->substr(comma + 1));
    }
  } else {
    s.fields.insert(s.fields.end(), 4, "");
  }

  const int quality = fix.quality == FixQuality::NoFix ? 0 : fix.quality == FixQuality::Fix ? 1 : 2;
  s.fields.push_back(std::to_string(quality));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02d", fix.satellites < 0 ? 0 : fix.satellites);
  s.fields.emplace_back(buf);
  if (fix.hdop) {
    std::snprintf(buf, sizeof buf, "%.1f", *fix.hdop);
    s.fields.emplace_back(buf);
  } else {
    s.fields.emplace_back();
  }
  if (fix.altitude_m) {
    std::snprintf(buf, sizeof buf, "%.1f", *fix.altitude_m);
    s.fields.emplace_back(buf);
    s.fields.emplace_back("M");
  } else {
    s.fields.insert(s.fields.end(), 2, "");
  }
  // Geoid separation, its unit, DGPS age and station id are not tracked.
  s.fields.insert(s.fields.end(), 4, "");

  std::string body = s.talker + s.kind_tag;
  for (const auto& field : s.fields) body += "," + field;
  s.checksum = checksum(body);
  return s;
}

}  // namespace rover::nmea
