#include <gtest/gtest.h>

#include <random>

#include "generators.hpp"
#include "oracles.hpp"
#include "rover/nmea.hpp"

using namespace rover;
using namespace rover::nmea;

namespace {

const std::string kGga = "$GPGGA,123519,4807.038,N,01131.000,E,1,08,0.9,545.4,M,46.9,M,,*47";
const std::string kRmc = "$GPRMC,123519,A,4807.038,N,01131.000,E,022.4,084.4,230394,003.1,W*6A";

ErrorCode error_of(std::string_view line) {
  try {
    parse_sentence(line);
  } catch (const NmeaError& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error for " << line;
  return ErrorCode::NotPositional;
}

}  // namespace

TEST(Checksum, MatchesXorOracle) {
  const std::string body = kGga.substr(1, kGga.find('*') - 1);
  EXPECT_EQ(checksum(body), oracle::nmea_xor(body));
  EXPECT_EQ(checksum(body), 0x47);
}

TEST(ParseSentence, ReferenceGga) {
  const NmeaSentence s = parse_sentence(kGga);
  EXPECT_EQ(s.talker, "GP");
  EXPECT_EQ(s.kind, SentenceKind::GGA);
  EXPECT_EQ(s.checksum, 0x47);
  ASSERT_EQ(s.fields.size(), 14u);
  EXPECT_EQ(s.fields[1], "4807.038");
  EXPECT_EQ(s.fields[13], "");
}

TEST(ParseSentence, ToleratesLineEndings) {
  EXPECT_NO_THROW(parse_sentence(kGga + "\r\n"));
  EXPECT_NO_THROW(parse_sentence(kGga + "\n"));
}

TEST(ParseSentence, LowercaseChecksumAccepted) {
  const std::string lower = "$GPRMC,123519,A,4807.038,N,01131.000,E,022.4,084.4,230394,003.1,W*6a";
  EXPECT_EQ(parse_sentence(lower).kind, SentenceKind::RMC);
}

TEST(ParseSentence, Errors) {
  EXPECT_EQ(error_of(kGga.substr(0, kGga.size() - 2) + "00"), ErrorCode::BadChecksum);
  EXPECT_EQ(error_of(""), ErrorCode::Malformed);
  EXPECT_EQ(error_of("\r\n"), ErrorCode::Malformed);
  EXPECT_EQ(error_of(kGga.substr(1)), ErrorCode::Malformed);            // no '$'
  EXPECT_EQ(error_of(kGga.substr(0, kGga.find('*'))), ErrorCode::Malformed);  // no '*'
  EXPECT_EQ(error_of(kGga + "7"), ErrorCode::Malformed);                // three hex digits
  EXPECT_EQ(error_of("$GPGGA,\xC3\xA9*00"), ErrorCode::Malformed);      // non-ASCII
  EXPECT_EQ(error_of("$GP*17"), ErrorCode::Malformed);                  // short address
}

TEST(ParseSentence, UnknownKindPassesThrough) {
  const std::string body = "GPGSV,3,1,11";
  char cs[4];
  std::snprintf(cs, sizeof cs, "%02X", oracle::nmea_xor(body));
  const NmeaSentence s = parse_sentence("$" + body + "*" + cs);
  EXPECT_EQ(s.kind, SentenceKind::Other);
  EXPECT_EQ(s.kind_tag, "GSV");
  EXPECT_THROW(
      {
        try {
          to_fix(s);
        } catch (const NmeaError& e) {
          EXPECT_EQ(e.code(), ErrorCode::NotPositional);
          throw;
        }
      },
      NmeaError);
}

TEST(ParseSentence, RejectsEverySingleByteCorruption) {
  const std::string body = kGga.substr(1, kGga.find('*') - 1);
  std::mt19937 rng(5);
  for (std::size_t i = 0; i < body.size(); ++i) {
    for (int trial = 0; trial < 8; ++trial) {
      std::string corrupted = kGga;
      char replacement;
      do {
        replacement = static_cast<char>(0x20 + rng() % 0x5F);
      } while (replacement == corrupted[i + 1]);
      corrupted[i + 1] = replacement;
      EXPECT_THROW(parse_sentence(corrupted), NmeaError) << corrupted;
    }
  }
}

TEST(ToFix, GgaHandConversion) {
  const GpsFix fix = to_fix(parse_sentence(kGga));
  ASSERT_TRUE(fix.has_position());
  // 48 + 7.038/60 and 11 + 31.000/60
  EXPECT_NEAR(fix.point->lat(), 48.1173, 1e-6);
  EXPECT_NEAR(fix.point->lon(), 11.516667, 1e-6);
  EXPECT_EQ(fix.quality, FixQuality::Fix);
  EXPECT_EQ(fix.satellites, 8);
  EXPECT_DOUBLE_EQ(*fix.hdop, 0.9);
  EXPECT_DOUBLE_EQ(*fix.altitude_m, 545.4);
  EXPECT_DOUBLE_EQ(fix.utc_time, 12 * 3600 + 35 * 60 + 19);
}

TEST(ToFix, GgaQualityZeroIsNoFix) {
  NmeaSentence s = parse_sentence(kGga);
  s.fields[5] = "0";
  const GpsFix fix = to_fix(s);
  EXPECT_EQ(fix.quality, FixQuality::NoFix);
  EXPECT_FALSE(fix.point.has_value());
}

TEST(ToFix, SouthWestHemispheresAreNegative) {
  NmeaSentence s = parse_sentence(kGga);
  s.fields[2] = "S";
  s.fields[4] = "W";
  const GpsFix fix = to_fix(s);
  EXPECT_NEAR(fix.point->lat(), -48.1173, 1e-6);
  EXPECT_NEAR(fix.point->lon(), -11.516667, 1e-6);
}

TEST(ToFix, Rmc) {
  const GpsFix fix = to_fix(parse_sentence(kRmc));
  EXPECT_EQ(fix.quality, FixQuality::Fix);
  EXPECT_NEAR(fix.point->lat(), 48.1173, 1e-6);
  NmeaSentence v = parse_sentence(kRmc);
  v.fields[1] = "V";
  EXPECT_EQ(to_fix(v).quality, FixQuality::NoFix);
}

TEST(ToFix, MalformedCoordinates) {
  for (const char* bad : {"48O7.038", "9107.038", "4860.5", "807.038", ""}) {
    NmeaSentence s = parse_sentence(kGga);
    s.fields[1] = bad;
    EXPECT_THROW(to_fix(s), NmeaError) << bad;
  }
}

TEST(EncodeFix, Origin) {
  GpsFix fix;
  fix.quality = FixQuality::Fix;
  fix.point = geo::GeoPoint(0, 0);
  fix.satellites = 8;
  fix.hdop = 0.9;
  const std::string wire = encode_fix(fix).to_string();
  EXPECT_NE(wire.find("0000.0000,N,00000.0000,E"), std::string::npos) << wire;
  EXPECT_EQ(wire, "$GPGGA,000000.00,0000.0000,N,00000.0000,E,1,08,0.9,,,,,,*5D\r\n");
}

TEST(EncodeFix, InverseOfHandConversion) {
  GpsFix fix;
  fix.quality = FixQuality::Fix;
  fix.point = geo::GeoPoint(48.1173, 11.516667);
  const NmeaSentence s = encode_fix(fix);
  EXPECT_EQ(s.fields[1], "4807.0380");
  EXPECT_EQ(s.fields[2], "N");
  EXPECT_EQ(s.fields[3], "01131.0000");
  EXPECT_EQ(s.fields[4], "E");
}

TEST(EncodeFix, NoFixHasEmptyPosition) {
  GpsFix fix;
  fix.utc_time = 45319.5;
  const NmeaSentence s = encode_fix(fix);
  EXPECT_EQ(s.fields[0], "123519.50");
  EXPECT_EQ(s.fields[1], "");
  EXPECT_EQ(s.fields[5], "0");
  EXPECT_EQ(to_fix(parse_sentence(s.to_string())).quality, FixQuality::NoFix);
}

TEST(EncodeFix, RequiresPointWhenFixed) {
  GpsFix fix;
  fix.quality = FixQuality::DGps;
  EXPECT_THROW(encode_fix(fix), std::invalid_argument);
}

TEST(EncodeFix, AntimeridianRoundsToEast) {
  GpsFix fix;
  fix.quality = FixQuality::Fix;
  fix.point = geo::GeoPoint(-33.0, -179.999999999);
  const std::string first = encode_fix(fix).to_string();
  EXPECT_NE(first.find("18000.0000,E"), std::string::npos);
  EXPECT_EQ(encode_fix(to_fix(parse_sentence(first))).to_string(), first);
}

TEST(EncodeFix, RoundTripsWithinMinuteResolution) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lat(-90, 90), lon(-180, 180), t(0, 86399.99);
  for (int i = 0; i < 5000; ++i) {
    GpsFix fix;
    fix.quality = i % 3 == 0 ? FixQuality::DGps : FixQuality::Fix;
    fix.point = geo::GeoPoint(lat(rng), lon(rng));
    fix.utc_time = t(rng);
    const GpsFix back = to_fix(parse_sentence(encode_fix(fix).to_string()));
    ASSERT_EQ(back.quality, fix.quality);
    ASSERT_NEAR(back.point->lat(), fix.point->lat(), 1e-6);
    // Longitudes near the antimeridian may come back as the equivalent +180.
    const double dlon = std::remainder(back.point->lon() - fix.point->lon(), 360.0);
    ASSERT_NEAR(dlon, 0.0, 1e-6);
  }
}

TEST(EncodeFix, NoFixKeepsSatellitesHdopAndAltitude) {
  GpsFix fix;
  fix.utc_time = 3600.5;
  fix.satellites = 8;
  fix.hdop = 3.9;
  fix.altitude_m = 3683.1;
  const std::string line = encode_fix(fix).to_string();
  EXPECT_EQ(to_fix(parse_sentence(line)), fix);
  EXPECT_EQ(encode_fix(to_fix(parse_sentence(line))).to_string(), line);
}

TEST(EncodeFix, ReencodingIsAFixedPoint) {
  gen::Rng rng(12);
  for (int i = 0; i < 5000; ++i) {
    const std::string first = encode_fix(gen::fix(rng)).to_string();
    ASSERT_EQ(encode_fix(to_fix(parse_sentence(first))).to_string(), first);
  }
}
