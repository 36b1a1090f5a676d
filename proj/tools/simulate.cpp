// simulate --scenario <name> [--config <path>] [--set key=value ...] --out <path>
//
// Exit status: 0 success, 1 configuration or I/O error, 2 numerical error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "phsq/errors.hpp"
#include "phsq/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Phonon-mediated spin squeezing scenarios"};
  std::string scenario, config_path, out;
  std::vector<std::string> sets;
  std::string names;
  for (const auto& n : phsq::scenario_names()) names += (names.empty() ? "" : ", ") + n;
  app.add_option("--scenario", scenario, "One of: " + names)->required();
  app.add_option("--config", config_path, "Flat key=value file")->check(CLI::ExistingFile);
  app.add_option("--set", sets, "Override, key=value (repeatable)");
  app.add_option("--out", out, "CSV output path")->required();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    std::string text;
    if (!config_path.empty()) {
      std::ifstream f(config_path, std::ios::binary);
      if (!f) throw std::runtime_error("cannot read '" + config_path + "'");
      std::ostringstream ss;
      ss << f.rdbuf();
      text = ss.str();
    }
    const auto cfg = phsq::parse_config(scenario, text, sets);
    const auto table = phsq::run_scenario(cfg);
    phsq::write_csv(table, out);
  } catch (const phsq::NumericalError& e) {
    std::cerr << "simulate: numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "simulate: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
