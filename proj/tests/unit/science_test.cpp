#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "rover/science/science.hpp"

using namespace rover::science;

namespace {

ScienceErrc code_of(auto&& fn) {
  try {
    fn();
  } catch (const ScienceError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no ScienceError thrown";
  return ScienceErrc::BadRow;
}

}  // namespace

TEST(Ph, Examples) {
  EXPECT_TRUE(ph_habitable(7.0));
  EXPECT_TRUE(ph_habitable(6.5));
  EXPECT_TRUE(ph_habitable(9.0));
  EXPECT_FALSE(ph_habitable(10.0));
  EXPECT_FALSE(ph_habitable(6.49));
  EXPECT_EQ(code_of([] { ph_habitable(-0.1); }), ScienceErrc::OutOfScale);
  EXPECT_EQ(code_of([] { ph_habitable(14.01); }), ScienceErrc::OutOfScale);
  EXPECT_EQ(code_of([] { ph_habitable(NAN); }), ScienceErrc::OutOfScale);
}

TEST(Ph, BoundaryScanMatchesClosedInterval) {
  for (int i = 0; i <= 1400; ++i) {
    const double ph = i / 100.0;
    const bool expected = i >= 650 && i <= 900;
    ASSERT_EQ(ph_habitable(ph), expected) << ph;
  }
}

TEST(Biomass, Examples) {
  EXPECT_EQ(biomass_fraction(100, 90), 0.10);
  EXPECT_EQ(biomass_fraction(50, 50), 0.0);
  EXPECT_EQ(code_of([] { biomass_fraction(100, 101); }), ScienceErrc::MassGain);
  EXPECT_EQ(code_of([] { biomass_fraction(0, 0); }), ScienceErrc::NonPositiveMass);
  EXPECT_EQ(code_of([] { biomass_fraction(-5, -6); }), ScienceErrc::NonPositiveMass);
  EXPECT_EQ(code_of([] { biomass_fraction(10, -1); }), ScienceErrc::NegativeMass);
}

TEST(Biomass, BoundedAndMonotone) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> mass(0.1, 1000);
  for (int i = 0; i < 10000; ++i) {
    const double before = mass(rng);
    std::uniform_real_distribution<double> after(0.0, before);
    const double a = after(rng), b = after(rng);
    const double fa = biomass_fraction(before, a), fb = biomass_fraction(before, b);
    ASSERT_GE(fa, 0.0);
    ASSERT_LE(fa, 1.0);
    if (a < b) ASSERT_GE(fa, fb);
  }
}

TEST(Capillary, Classes) {
  EXPECT_EQ(classify_capillary(std::nullopt), CapillaryClass::Unknown);
  EXPECT_EQ(classify_capillary(0.99), CapillaryClass::Low);
  EXPECT_EQ(classify_capillary(1.0), CapillaryClass::Medium);
  EXPECT_EQ(classify_capillary(4.99), CapillaryClass::Medium);
  EXPECT_EQ(classify_capillary(5.0), CapillaryClass::High);
  EXPECT_EQ(classify_capillary(2.0, {3.0, 10.0}), CapillaryClass::Low);
}

TEST(Analyze, FullReport) {
  const auto r = analyze({12.0, 7.2, 100.0, 92.0, 2.5});
  EXPECT_TRUE(r.ph_in_life_band);
  EXPECT_EQ(r.volatile_fraction, biomass_fraction(100, 92));
  EXPECT_NEAR(r.volatile_fraction, 0.08, 1e-15);
  EXPECT_EQ(r.capillary_class, CapillaryClass::Medium);
  EXPECT_NE(r.notes.find("0.67 mSv/day"), std::string::npos);
  EXPECT_NE(r.notes.find("37.5%"), std::string::npos);
  EXPECT_EQ(analyze({12.0, 7.2, 100.0, 92.0, std::nullopt}).capillary_class, CapillaryClass::Unknown);
  EXPECT_EQ(code_of([] { analyze({12.0, 15.0, 100.0, 92.0, std::nullopt}); }), ScienceErrc::OutOfScale);
}

TEST(Csv, ReadsAndReportsRows) {
  std::istringstream in(
      "# field samples\n"
      "ph, depth_cm, mass_before_g, mass_after_g, capillary_rise_mm_per_min\n"
      "7.2, 12, 100, 92, 2.5\n"
      "\n"
      "8.5, 11, 80, 80,\n"
      "5.0, 10, 100, 101, 6\n"
      "7.0, ten, 100, 90, 1\n");
  const auto rows = read_samples(in);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_TRUE(rows[0].sample);
  EXPECT_FALSE(rows[1].sample->capillary_rise_mm_per_min);
  EXPECT_FALSE(rows[3].sample);
  EXPECT_EQ(rows[3].line, 7u);

  std::istringstream lines(analyze_to_json_lines(rows));
  std::vector<nlohmann::json> out;
  for (std::string l; std::getline(lines, l);) out.push_back(nlohmann::json::parse(l));
  ASSERT_EQ(out.size(), 4u);
  EXPECT_EQ(out[0]["phInLifeBand"], true);
  EXPECT_EQ(out[0]["capillaryClass"], "medium");
  EXPECT_EQ(out[1]["volatileFraction"], 0.0);
  EXPECT_EQ(out[1]["capillaryClass"], "unknown");
  EXPECT_EQ(out[2]["error"], "massGain");
  EXPECT_EQ(out[3]["error"], "badRow");
}

TEST(Csv, MissingColumnRejected) {
  std::istringstream in("ph, depth_cm, mass_before_g\n7, 10, 100\n");
  EXPECT_THROW(read_samples(in), ScienceError);
  std::istringstream empty("");
  EXPECT_THROW(read_samples(empty), ScienceError);
}
