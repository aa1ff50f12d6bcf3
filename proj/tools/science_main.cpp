#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rover/science/science.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Soil sample habitability analysis"};
  app.require_subcommand(1);
  auto* analyze = app.add_subcommand("analyze", "Analyze a CSV of soil samples");
  std::string input;
  rover::science::CapillaryThresholds thresholds;
  analyze->add_option("--input", input, "Sample CSV (use - for stdin)")->required();
  analyze->add_option("--capillary-medium", thresholds.medium_from, "Rise rate (mm/min) where medium capillarity starts");
  analyze->add_option("--capillary-high", thresholds.high_from, "Rise rate (mm/min) where high capillarity starts");
  CLI11_PARSE(app, argc, argv);

  std::ifstream file;
  if (input != "-") {
    file.open(input);
    if (!file) {
      std::cerr << "science: cannot read " << input << '\n';
      return 2;
    }
  }
  std::istream& in = input == "-" ? std::cin : file;

  try {
    const auto rows = rover::science::read_samples(in);
    const std::string out = rover::science::analyze_to_json_lines(rows, thresholds);
    std::cout << out;
    std::istringstream lines(out);
    for (std::string line; std::getline(lines, line);)
      if (nlohmann::json::parse(line).contains("error")) return 1;
  } catch (const std::exception& e) {
    std::cerr << "science: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
